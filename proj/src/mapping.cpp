#include "tfgen/mapping.hpp"

#include "tfgen/error.hpp"
#include "tfgen/word.hpp"

namespace tfgen {

Mapping::Mapping(Fn fn, std::string label)
    : fn_(std::make_shared<const Fn>(std::move(fn))), label_(std::move(label)) {}

std::uint64_t Mapping::operator()(std::uint64_t x, unsigned width) const {
  const std::uint64_t mask = width_mask(width);
  return (*fn_)(x & mask, width) & mask;
}

std::vector<std::uint64_t> Mapping::table(unsigned width) const {
  if (width > 30) throw Error("table width " + std::to_string(width) + " too large");
  std::vector<std::uint64_t> out(std::size_t{1} << width);
  for (std::uint64_t x = 0; x < out.size(); ++x) out[x] = (*this)(x, width);
  return out;
}

Mapping Mapping::from_table(std::vector<std::uint64_t> table, unsigned width, std::string label) {
  if (table.size() != (std::size_t{1} << width)) throw Error("table size does not match width");
  auto shared = std::make_shared<const std::vector<std::uint64_t>>(std::move(table));
  return Mapping(
      [shared, width](std::uint64_t x, unsigned w) -> std::uint64_t {
        if (w > width) throw Error("tabulated mapping evaluated above its width " + std::to_string(width));
        return (*shared)[x];
      },
      std::move(label));
}

Mapping Mapping::identity() {
  return Mapping([](std::uint64_t x, unsigned) { return x; }, "x");
}

Mapping Mapping::constant(std::uint64_t c) {
  return Mapping([c](std::uint64_t, unsigned) { return c; }, std::to_string(c));
}

}  // namespace tfgen

#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace tfgen {

// A univariate mapping evaluated on Z/2^n for a caller-chosen width n. Results are
// always reduced modulo 2^n. Cheap to copy; the evaluator is shared.
class Mapping {
 public:
  using Fn = std::function<std::uint64_t(std::uint64_t x, unsigned width)>;

  Mapping() = default;
  explicit Mapping(Fn fn, std::string label = {});

  std::uint64_t operator()(std::uint64_t x, unsigned width) const;
  std::vector<std::uint64_t> table(unsigned width) const;
  const std::string& label() const noexcept { return label_; }
  explicit operator bool() const noexcept { return static_cast<bool>(fn_); }

  // A mapping known only through its values on Z/2^width. Evaluating it at a smaller
  // width reduces input and output, which is exact for compatible tables.
  static Mapping from_table(std::vector<std::uint64_t> table, unsigned width, std::string label = {});
  static Mapping identity();
  static Mapping constant(std::uint64_t c);

 private:
  std::shared_ptr<const Fn> fn_;
  std::string label_;
};

}  // namespace tfgen

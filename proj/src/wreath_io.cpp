#include <fstream>
#include <iterator>

#include "tfgen/error.hpp"
#include "tfgen/wreath.hpp"

namespace tfgen {

namespace {

void check_word_bits(unsigned k) {
  if (k == 0 || k > 64) throw Error("word width must be in [1, 64]");
}

}  // namespace

GeneratorSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open spec file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error("spec file " + path + " is not valid JSON: " + e.what());
  }
  return spec_from_json(j);
}

std::vector<std::uint8_t> pack_words(const std::vector<std::uint64_t>& words, unsigned k) {
  check_word_bits(k);
  const std::uint64_t bits = words.size() * static_cast<std::uint64_t>(k);
  std::vector<std::uint8_t> out((bits + 7) / 8, 0);
  std::uint64_t pos = 0;
  for (auto w : words) {
    for (unsigned b = 0; b < k; ++b, ++pos) {
      if ((w >> b) & 1U) out[pos / 8] |= static_cast<std::uint8_t>(1U << (pos % 8));
    }
  }
  return out;
}

std::vector<std::uint64_t> unpack_words(const std::vector<std::uint8_t>& bytes, unsigned k,
                                        std::optional<std::uint64_t> count) {
  check_word_bits(k);
  const std::uint64_t available = bytes.size() * 8ULL / k;
  const std::uint64_t n = count.value_or(available);
  if (n > available) throw Error("keystream holds only " + std::to_string(available) + " words of " + std::to_string(k) + " bits");
  std::vector<std::uint64_t> out(n, 0);
  std::uint64_t pos = 0;
  for (auto& w : out) {
    for (unsigned b = 0; b < k; ++b, ++pos) w |= static_cast<std::uint64_t>((bytes[pos / 8] >> (pos % 8)) & 1U) << b;
  }
  return out;
}

void write_keystream(const std::string& path, const std::vector<std::uint64_t>& words, unsigned k) {
  const auto bytes = pack_words(words, k);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write to " + path + " failed");
}

std::vector<std::uint64_t> read_keystream(const std::string& path, unsigned k, std::optional<std::uint64_t> count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open keystream " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return unpack_words(bytes, k, count);
}

}  // namespace tfgen

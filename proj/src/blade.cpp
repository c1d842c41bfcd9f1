#include "diracl2/blade.hpp"

#include <array>
#include <memory>
#include <mutex>

namespace diracl2 {

SignTable::SignTable(int n) : n_(n) {
  const std::size_t dim = std::size_t(1) << n;
  signs_.resize(dim * dim);
  for (std::uint32_t a = 0; a < dim; ++a)
    for (std::uint32_t b = 0; b < dim; ++b)
      signs_[(std::size_t(a) << n) | b] =
          static_cast<std::int8_t>(blade_product(Blade{a}, Blade{b}).sign);
}

const SignTable& SignTable::get(int n) {
  static std::array<std::unique_ptr<SignTable>, kMaxTableN + 1> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  if (!cache[n]) cache[n] = std::unique_ptr<SignTable>(new SignTable(n));
  return *cache[n];
}

std::string blade_name(Blade b) {
  if (b.mask == 0) return "e0";
  std::vector<int> gens;
  for (int g = 1; g <= 32; ++g)
    if (b.contains(g)) gens.push_back(g);
  const bool wide = gens.back() >= 10;
  std::string out = "e";
  if (wide) out += '{';
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (wide && i > 0) out += ',';
    out += std::to_string(gens[i]);
  }
  if (wide) out += '}';
  return out;
}

Blade parse_blade_name(const std::string& name) {
  if (name.size() < 2 || name[0] != 'e')
    throw config_error("blade name must look like e0, e2, e13: '" + name +
                       "'");
  std::string body = name.substr(1);
  std::vector<int> gens;
  if (body.front() == '{') {
    if (body.back() != '}')
      throw config_error("unterminated blade name '" + name + "'");
    body = body.substr(1, body.size() - 2);
    std::size_t pos = 0;
    while (pos < body.size()) {
      std::size_t comma = body.find(',', pos);
      if (comma == std::string::npos) comma = body.size();
      gens.push_back(std::stoi(body.substr(pos, comma - pos)));
      pos = comma + 1;
    }
  } else {
    if (body == "0") return kScalarBlade;
    for (char c : body) {
      if (c < '1' || c > '9')
        throw config_error("bad generator digit in blade name '" + name +
                           "'");
      gens.push_back(c - '0');
    }
  }
  Blade out;
  for (int g : gens) {
    if (g < 1 || g > kMaxAlgebraN)
      throw config_error("generator index out of range in '" + name + "'");
    if (out.contains(g))
      throw config_error("repeated generator in blade name '" + name + "'");
    out.mask |= 1u << (g - 1);
  }
  return out;
}

}  // namespace diracl2

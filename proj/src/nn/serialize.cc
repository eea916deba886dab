#include "aquasift/nn/serialize.h"

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace aquasift::nn {

static_assert(std::endian::native == std::endian::little,
              "weights files are written in native little-endian order");

namespace {

constexpr char kMagic[4] = {'A', 'Q', 'S', 'W'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
T get(std::istream& in) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
    throw std::runtime_error("truncated weights file");
  }
  return v;
}

}  // namespace

void write_parameters(const ParameterSet& params, std::ostream& out) {
  out.write(kMagic, 4);
  put<std::uint32_t>(out, kVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(params.size()));
  for (const auto& p : params) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(p->name.size()));
    out.write(p->name.data(), static_cast<std::streamsize>(p->name.size()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(p->value.rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(p->value.cols()));
    out.write(reinterpret_cast<const char*>(p->value.data()),
              static_cast<std::streamsize>(p->value.size() * sizeof(double)));
  }
}

ParameterSet read_parameters(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::string(magic, 4) != std::string(kMagic, 4)) {
    throw std::runtime_error("not a weights file (bad magic)");
  }
  if (get<std::uint32_t>(in) != kVersion) {
    throw std::runtime_error("unsupported weights file version");
  }
  const auto count = get<std::uint32_t>(in);
  ParameterSet params;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name(get<std::uint32_t>(in), '\0');
    if (!in.read(name.data(), static_cast<std::streamsize>(name.size()))) {
      throw std::runtime_error("truncated weights file");
    }
    const auto rows = static_cast<Eigen::Index>(get<std::uint64_t>(in));
    const auto cols = static_cast<Eigen::Index>(get<std::uint64_t>(in));
    Matrix m(rows, cols);
    if (!in.read(reinterpret_cast<char*>(m.data()),
                 static_cast<std::streamsize>(m.size() * sizeof(double)))) {
      throw std::runtime_error("truncated weights file");
    }
    params.add(name, std::move(m));
  }
  return params;
}

std::size_t copy_matching(const ParameterSet& source, ParameterSet& target) {
  std::size_t copied = 0;
  for (auto& t : target) {
    for (const auto& s : source) {
      if (s->name != t->name) continue;
      if (s->value.rows() != t->value.rows() || s->value.cols() != t->value.cols()) {
        throw std::runtime_error("shape mismatch for tensor " + t->name);
      }
      t->value = s->value;
      ++copied;
      break;
    }
  }
  return copied;
}

void hash_parameters(const ParameterSet& params, Fnv1a& hasher) {
  for (const auto& p : params) {
    hasher.update(p->name);
    const std::uint64_t shape[2] = {static_cast<std::uint64_t>(p->value.rows()),
                                    static_cast<std::uint64_t>(p->value.cols())};
    hasher.update(shape, sizeof shape);
    hasher.update(p->value.data(), static_cast<std::size_t>(p->value.size()) * sizeof(double));
  }
}

}  // namespace aquasift::nn

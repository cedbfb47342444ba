#include "gmhd/checkpoint.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <vector>

namespace gmhd {

namespace {

void put_u32(std::vector<unsigned char>& buf, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_u64(std::vector<unsigned char>& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& buf, double v) { put_u64(buf, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

double get_f64(const unsigned char* p) { return std::bit_cast<double>(get_u64(p)); }

[[noreturn]] void bad_field(const std::string& path, const char* field, std::size_t offset,
                            const std::string& detail) {
  std::ostringstream os;
  os << "checkpoint '" << path << "': header field '" << field << "' at offset " << offset << ": "
     << detail;
  throw Error(os.str());
}

}  // namespace

Checkpoint Checkpoint::from_state(const FlowState& state, const PhysicsParams& params) {
  Checkpoint ck;
  ck.n = state.grid()->n();
  ck.box_length = state.grid()->box_length();
  ck.time = state.time;
  ck.params = params;
  ck.omega = state.omega_hat.coeffs;
  ck.current = state.j_hat.coeffs;
  return ck;
}

void write_checkpoint(const std::string& path, const Checkpoint& ck) {
  const std::size_t nn = static_cast<std::size_t>(ck.n) * ck.n;
  std::vector<unsigned char> buf;
  buf.reserve(Checkpoint::kHeaderBytes + 2 * nn * 16);
  buf.insert(buf.end(), std::begin(Checkpoint::kMagic), std::end(Checkpoint::kMagic));
  put_u32(buf, ck.version);
  put_u64(buf, static_cast<std::uint64_t>(ck.n));
  put_f64(buf, ck.box_length);
  put_f64(buf, ck.time);
  put_f64(buf, ck.params.nu);
  put_f64(buf, ck.params.alpha);
  put_f64(buf, ck.params.kappa);
  put_f64(buf, ck.params.beta);
  for (const Coefficients* c : {&ck.omega, &ck.current}) {
    for (int i1 = 0; i1 < ck.n; ++i1) {
      for (int i2 = 0; i2 < ck.n; ++i2) {
        put_f64(buf, (*c)(i1, i2).real());
        put_f64(buf, (*c)(i1, i2).imag());
      }
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("checkpoint: cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error("checkpoint: write to '" + path + "' failed");
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("checkpoint: cannot open '" + path + "'");
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  const std::size_t size = buf.size();

  auto need = [&](const char* field, std::size_t offset, std::size_t width) {
    if (size < offset + width) bad_field(path, field, offset, "file truncated");
  };

  need("magic", 0, 7);
  if (std::memcmp(buf.data(), Checkpoint::kMagic, 7) != 0) {
    bad_field(path, "magic", 0, "expected \"GMHD2D\\0\"");
  }
  Checkpoint ck;
  need("version", 7, 4);
  ck.version = get_u32(buf.data() + 7);
  if (ck.version != Checkpoint::kVersion) {
    bad_field(path, "version", 7, "unsupported version " + std::to_string(ck.version));
  }
  need("n", 11, 8);
  const std::uint64_t n = get_u64(buf.data() + 11);
  if (n < 8 || n % 2 != 0 || n > (1u << 16)) {
    bad_field(path, "n", 11, "invalid grid size " + std::to_string(n));
  }
  ck.n = static_cast<int>(n);

  struct F64Field {
    const char* name;
    std::size_t offset;
    double* dst;
  };
  const F64Field f64s[] = {{"box_length", 19, &ck.box_length}, {"time", 27, &ck.time},
                           {"nu", 35, &ck.params.nu},          {"alpha", 43, &ck.params.alpha},
                           {"kappa", 51, &ck.params.kappa},    {"beta", 59, &ck.params.beta}};
  for (const auto& f : f64s) {
    need(f.name, f.offset, 8);
    *f.dst = get_f64(buf.data() + f.offset);
    if (!std::isfinite(*f.dst)) bad_field(path, f.name, f.offset, "non-finite value");
  }
  if (!(ck.box_length > 0.0)) bad_field(path, "box_length", 19, "must be positive");
  for (const auto& f : f64s) {
    if (f.offset >= 35 && *f.dst < 0.0) bad_field(path, f.name, f.offset, "must be >= 0");
  }

  const std::size_t nn = static_cast<std::size_t>(n) * n;
  const std::size_t expected = Checkpoint::kHeaderBytes + 2 * nn * 16;
  if (size != expected) {
    std::ostringstream os;
    os << "checkpoint '" << path << "': payload at offset " << Checkpoint::kHeaderBytes
       << " has " << (size - std::min(size, Checkpoint::kHeaderBytes)) << " bytes, expected "
       << 2 * nn * 16 << " for n=" << n;
    throw Error(os.str());
  }
  const unsigned char* p = buf.data() + Checkpoint::kHeaderBytes;
  for (Coefficients* c : {&ck.omega, &ck.current}) {
    c->resize(ck.n, ck.n);
    for (int i1 = 0; i1 < ck.n; ++i1) {
      for (int i2 = 0; i2 < ck.n; ++i2) {
        (*c)(i1, i2) = Complex(get_f64(p), get_f64(p + 8));
        p += 16;
      }
    }
  }
  return ck;
}

}  // namespace gmhd

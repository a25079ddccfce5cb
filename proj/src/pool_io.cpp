#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include "gmon/error.hpp"
#include "gmon/steady_state_pool.hpp"

namespace gmon {

namespace {

constexpr char kMagic[6] = {'S', 'S', 'P', 'O', 'O', 'L'};

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(b[i], b[sizeof(T) - 1 - i]);
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

class Writer {
 public:
  void u32(std::uint32_t v) { raw(to_little(v)); }
  void u64(std::uint64_t v) { raw(to_little(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void bytes(const char* p, std::size_t n) { buf_.append(p, n); }
  std::string& buffer() { return buf_; }

 private:
  template <class T>
  void raw(T v) {
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    buf_.append(b, sizeof(T));
  }
  std::string buf_;
};

class Reader {
 public:
  explicit Reader(std::string_view data) : data_(data) {}

  std::uint32_t u32() { return to_little(raw<std::uint32_t>()); }
  std::uint64_t u64() { return to_little(raw<std::uint64_t>()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string_view take(std::size_t n) {
    need(n);
    auto out = data_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::size_t remaining() const { return data_.size() - pos_; }
  std::size_t position() const { return pos_; }
  void need(std::size_t n) const {
    if (remaining() < n) throw PoolTruncated("pool file truncated");
  }

 private:
  template <class T>
  T raw() {
    need(sizeof(T));
    T v;
    std::memcpy(&v, data_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::string_view data_;
  std::size_t pos_ = 0;
};

std::size_t record_bytes(const LocalFamily& family) {
  switch (family.index()) {
    case 0: return 8;
    case 1: return 7 * 8;
    default: {
      const auto d = static_cast<std::size_t>(std::get<NpParams>(family).d);
      return 8 * (4 + 4 + 4 * d) + 2 * 4;
    }
  }
}

void write_params(Writer& w, const LocalFamily& family) {
  switch (family.index()) {
    case 0: w.f64(std::get<CusumParams>(family).mu); break;
    case 1: {
      const auto& p = std::get<AdaptiveParams>(family);
      w.f64(p.rho);
      w.f64(p.s0);
      w.f64(p.t0);
      break;
    }
    default: {
      const auto& p = std::get<NpParams>(family);
      w.u32(static_cast<std::uint32_t>(p.d));
      w.u32(static_cast<std::uint32_t>(p.n));
      for (double a : p.alpha1) w.f64(a);
      for (double a : p.alpha2) w.f64(a);
    }
  }
}

LocalFamily read_params(Reader& r, StatisticKind kind) {
  switch (kind) {
    case StatisticKind::cusum: return CusumParams{r.f64()};
    case StatisticKind::adaptive: {
      AdaptiveParams p;
      p.rho = r.f64();
      p.s0 = r.f64();
      p.t0 = r.f64();
      return p;
    }
    case StatisticKind::nonparametric: {
      NpParams p;
      p.d = static_cast<int>(r.u32());
      p.n = static_cast<int>(r.u32());
      if (p.d < 1 || p.d > 1'000'000) throw PoolFormatError("pool file: bad region count");
      r.need(16 * static_cast<std::size_t>(p.d));
      p.alpha1.resize(static_cast<std::size_t>(p.d));
      p.alpha2.resize(static_cast<std::size_t>(p.d));
      for (double& a : p.alpha1) a = r.f64();
      for (double& a : p.alpha2) a = r.f64();
      return p;
    }
  }
  throw PoolFormatError("pool file: unknown statistic kind");
}

void write_body(Writer& w, const SteadyStatePool& pool) {
  std::visit(
      [&](const auto& snaps) {
        using Snap = typename std::decay_t<decltype(snaps)>::value_type;
        for (const auto& s : snaps) {
          if constexpr (std::is_same_v<Snap, CusumState>) {
            w.f64(s.s_plus);
          } else if constexpr (std::is_same_v<Snap, AdaptiveCusumState>) {
            for (double v : {s.s1, s.s2, s.t1, s.t2, s.c1, s.c2, s.x_prev}) w.f64(v);
          } else {
            for (double v : s.shat) w.f64(v);
            for (double v : s.n_count) w.f64(v);
            for (const auto& cell : s.n_cell)
              for (double v : cell) w.f64(v);
            for (int y : s.y_prev) w.u32(static_cast<std::uint32_t>(y));
          }
        }
      },
      pool.snapshots);
  for (double v : pool.sorted_values) w.f64(v);
}

SnapshotSet read_body(Reader& r, const LocalFamily& family, std::size_t k) {
  switch (family.index()) {
    case 0: {
      std::vector<CusumState> out(k);
      for (auto& s : out) s.s_plus = r.f64();
      return out;
    }
    case 1: {
      std::vector<AdaptiveCusumState> out(k);
      for (auto& s : out) {
        s.s1 = r.f64();
        s.s2 = r.f64();
        s.t1 = r.f64();
        s.t2 = r.f64();
        s.c1 = r.f64();
        s.c2 = r.f64();
        s.x_prev = r.f64();
      }
      return out;
    }
    default: {
      const int d = std::get<NpParams>(family).d;
      std::vector<NpSnapshot> out(k, NpSnapshot::zero(d));
      for (auto& s : out) {
        for (double& v : s.shat) v = r.f64();
        for (double& v : s.n_count) v = r.f64();
        for (auto& cell : s.n_cell)
          for (double& v : cell) v = r.f64();
        for (int& y : s.y_prev) y = static_cast<int>(r.u32());
      }
      return out;
    }
  }
}

}  // namespace

void save_pool(const SteadyStatePool& pool, std::ostream& out) {
  Writer header;
  header.bytes(kMagic, sizeof kMagic);
  header.u32(kPoolFormatVersion);
  header.u32(static_cast<std::uint32_t>(pool.kind()));
  write_params(header, pool.config.statistic);
  header.u64(pool.size());
  header.u64(pool.config.burn_in);
  header.u64(pool.config.seed);

  Writer body;
  write_body(body, pool);
  Writer trailer;
  trailer.u64(fnv1a64(body.buffer()));

  out.write(header.buffer().data(), static_cast<std::streamsize>(header.buffer().size()));
  out.write(body.buffer().data(), static_cast<std::streamsize>(body.buffer().size()));
  out.write(trailer.buffer().data(), static_cast<std::streamsize>(trailer.buffer().size()));
  if (!out) throw Error("failed to write pool");
}

void save_pool(const SteadyStatePool& pool, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open pool file for writing: " + path.string());
  save_pool(pool, out);
}

SteadyStatePool load_pool(std::istream& in, const StatisticKind* expected) {
  const std::string data{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  Reader r(data);

  if (r.remaining() < sizeof kMagic) throw PoolFormatError("not a pool file (too short)");
  if (std::memcmp(r.take(sizeof kMagic).data(), kMagic, sizeof kMagic) != 0) {
    throw PoolFormatError("not a pool file (bad magic)");
  }
  const std::uint32_t version = r.u32();
  if (version != kPoolFormatVersion) {
    throw PoolVersionMismatch("pool format version " + std::to_string(version) +
                              ", expected " + std::to_string(kPoolFormatVersion));
  }
  const std::uint32_t tag = r.u32();
  if (tag < 1 || tag > 3) throw PoolFormatError("pool file: unknown statistic kind tag");
  const auto kind = static_cast<StatisticKind>(tag);
  if (expected != nullptr && *expected != kind) {
    throw PoolKindMismatch("pool holds a " + std::string(to_string(kind)) +
                           " statistic, expected " + std::string(to_string(*expected)));
  }

  PoolConfig config;
  config.statistic = read_params(r, kind);
  const std::uint64_t k = r.u64();
  config.burn_in = r.u64();
  config.seed = r.u64();
  config.pool_size = k;

  const std::size_t per_record = record_bytes(config.statistic) + 8;
  if (k > r.remaining() / per_record) throw PoolTruncated("pool file truncated (body)");
  const std::size_t body_start = r.position();
  SnapshotSet snaps = read_body(r, config.statistic, k);
  std::vector<double> sorted(k);
  for (double& v : sorted) v = r.f64();
  const std::string_view body(data.data() + body_start, r.position() - body_start);
  const std::uint64_t stored = r.u64();
  if (r.remaining() != 0) throw PoolFormatError("pool file has trailing bytes");
  if (stored != fnv1a64(body)) throw PoolChecksumMismatch("pool file checksum mismatch");

  return SteadyStatePool{config, std::move(snaps), std::move(sorted)};
}

SteadyStatePool load_pool(const std::filesystem::path& path, const StatisticKind* expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open pool file: " + path.string());
  return load_pool(in, expected);
}

}  // namespace gmon

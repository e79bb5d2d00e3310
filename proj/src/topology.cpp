#include "jigsaw/topology.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <limits>
#include <map>

#include "jigsaw/error.hpp"

namespace jigsaw {

namespace {

constexpr std::uint64_t kMaxVertices = std::numeric_limits<std::uint32_t>::max();

std::uint64_t checked_pow(std::uint64_t base, std::uint32_t exp) {
  std::uint64_t out = 1;
  for (std::uint32_t i = 0; i < exp; ++i) {
    out *= base;
    if (out > kMaxVertices) throw UsageError("topology: vertex count exceeds 2^32 - 1");
  }
  return out;
}

std::uint32_t parse_uint(std::string_view key, std::string_view text) {
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw UsageError("topology: bad value for '" + std::string(key) + "': '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

Topology::Topology(Family f, std::uint32_t n, std::uint32_t d, std::uint32_t r, std::uint32_t m)
    : family_(f), n_(n), d_(d), r_(r), m_(m) {
  std::uint64_t size = 0;
  std::uint64_t degree = 0;
  switch (f) {
    case Family::Ring:
      if (n < 3) throw UsageError("ring requires n >= 3");
      size = n;
      degree = 2;
      break;
    case Family::Torus:
      if (n < 3) throw UsageError("torus requires n >= 3");
      if (d < 1) throw UsageError("torus requires d >= 1");
      size = checked_pow(n, d);
      degree = 2ull * d;
      break;
    case Family::RangeTorus:
      if (n < 3) throw UsageError("range torus requires n >= 3");
      if (r < 1) throw UsageError("range torus requires r >= 1");
      if (2ull * r + 1 > n) throw UsageError("range torus requires 2r + 1 <= n");
      size = checked_pow(n, 2);
      degree = (2ull * r + 1) * (2ull * r + 1) - 1;
      break;
    case Family::Hypercube:
      if (n < 1 || n > 30) throw UsageError("hypercube requires 1 <= n <= 30");
      size = 1ull << n;
      degree = n;
      break;
    case Family::Hamming:
      if (n < 3) throw UsageError("hamming requires n >= 3");
      if (d < 1) throw UsageError("hamming requires d >= 1");
      size = checked_pow(n, d);
      degree = static_cast<std::uint64_t>(d) * (n - 1);
      break;
    case Family::CompleteTimesRing:
      if (n < 1) throw UsageError("kxring requires n >= 1");
      if (m < 3) throw UsageError("kxring requires m >= 3");
      size = static_cast<std::uint64_t>(n) * m;
      if (size > kMaxVertices) throw UsageError("topology: vertex count exceeds 2^32 - 1");
      degree = (n - 1) + 2ull;
      break;
    case Family::Complete:
      if (n < 1) throw UsageError("complete requires n >= 1");
      size = n;
      degree = n - 1;
      break;
  }
  size_ = static_cast<std::size_t>(size);
  degree_ = static_cast<std::uint32_t>(degree);
}

Topology Topology::ring(std::uint32_t n) { return {Family::Ring, n, 1, 0, 0}; }
Topology Topology::torus(std::uint32_t n, std::uint32_t d) { return {Family::Torus, n, d, 0, 0}; }
Topology Topology::range_torus(std::uint32_t n, std::uint32_t r) {
  return {Family::RangeTorus, n, 2, r, 0};
}
Topology Topology::hypercube(std::uint32_t n) { return {Family::Hypercube, n, 0, 0, 0}; }
Topology Topology::hamming(std::uint32_t n, std::uint32_t d) { return {Family::Hamming, n, d, 0, 0}; }
Topology Topology::complete_times_ring(std::uint32_t n, std::uint32_t m) {
  return {Family::CompleteTimesRing, n, 0, 0, m};
}
Topology Topology::complete(std::uint32_t n) { return {Family::Complete, n, 0, 0, 0}; }

Topology Topology::parse(std::string_view spec) {
  const auto colon = spec.find(':');
  if (colon == std::string_view::npos) {
    throw UsageError("topology spec '" + std::string(spec) + "' lacks ':' (e.g. ring:n=1024)");
  }
  const std::string_view name = spec.substr(0, colon);
  std::map<std::string, std::uint32_t, std::less<>> kv;
  std::string_view rest = spec.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw UsageError("topology spec: expected key=value, got '" + std::string(item) + "'");
    }
    const std::string key(item.substr(0, eq));
    if (kv.contains(key)) throw UsageError("topology spec: duplicate key '" + key + "'");
    kv[key] = parse_uint(key, item.substr(eq + 1));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
  }

  auto take = [&](std::initializer_list<std::string_view> keys) {
    std::vector<std::uint32_t> values;
    for (auto k : keys) {
      auto it = kv.find(k);
      if (it == kv.end()) {
        throw UsageError("topology spec '" + std::string(spec) + "' is missing '" + std::string(k) + "'");
      }
      values.push_back(it->second);
      kv.erase(it);
    }
    if (!kv.empty()) {
      throw UsageError("topology spec '" + std::string(spec) + "' has unknown key '" + kv.begin()->first + "'");
    }
    return values;
  };

  if (name == "ring") return ring(take({"n"})[0]);
  if (name == "torus") {
    auto v = take({"n", "d"});
    return torus(v[0], v[1]);
  }
  if (name == "range") {
    auto v = take({"n", "r"});
    return range_torus(v[0], v[1]);
  }
  if (name == "hypercube") return hypercube(take({"n"})[0]);
  if (name == "hamming") {
    auto v = take({"n", "d"});
    return hamming(v[0], v[1]);
  }
  if (name == "kxring") {
    auto v = take({"n", "m"});
    return complete_times_ring(v[0], v[1]);
  }
  if (name == "complete") return complete(take({"n"})[0]);
  throw UsageError("unknown topology family '" + std::string(name) + "'");
}

std::string Topology::spec_string() const {
  const auto s = [](std::uint32_t v) { return std::to_string(v); };
  switch (family_) {
    case Family::Ring: return "ring:n=" + s(n_);
    case Family::Torus: return "torus:n=" + s(n_) + ",d=" + s(d_);
    case Family::RangeTorus: return "range:n=" + s(n_) + ",r=" + s(r_);
    case Family::Hypercube: return "hypercube:n=" + s(n_);
    case Family::Hamming: return "hamming:n=" + s(n_) + ",d=" + s(d_);
    case Family::CompleteTimesRing: return "kxring:n=" + s(n_) + ",m=" + s(m_);
    case Family::Complete: return "complete:n=" + s(n_);
  }
  return {};
}

void Topology::check_vertex(Vertex v) const {
  if (v >= size_) {
    throw UsageError("vertex " + std::to_string(v) + " out of range for " + spec_string());
  }
}

void Topology::append_neighbors(Vertex v, std::vector<Vertex>& out) const {
  check_vertex(v);
  switch (family_) {
    case Family::Ring:
      out.push_back(v == 0 ? n_ - 1 : v - 1);
      out.push_back(v + 1 == n_ ? 0 : v + 1);
      break;
    case Family::Torus: {
      std::uint64_t stride = 1;
      for (std::uint32_t i = 0; i < d_; ++i, stride *= n_) {
        const auto c = static_cast<std::uint32_t>((v / stride) % n_);
        const auto base = v - c * stride;
        out.push_back(static_cast<Vertex>(base + ((c + 1) % n_) * stride));
        out.push_back(static_cast<Vertex>(base + ((c + n_ - 1) % n_) * stride));
      }
      break;
    }
    case Family::RangeTorus: {
      const auto x = v % n_;
      const auto y = v / n_;
      const auto ri = static_cast<std::int64_t>(r_);
      for (std::int64_t dy = -ri; dy <= ri; ++dy) {
        for (std::int64_t dx = -ri; dx <= ri; ++dx) {
          if (dx == 0 && dy == 0) continue;
          const auto nx = static_cast<std::uint32_t>((x + n_ + dx) % n_);
          const auto ny = static_cast<std::uint32_t>((y + n_ + dy) % n_);
          out.push_back(nx + ny * n_);
        }
      }
      break;
    }
    case Family::Hypercube:
      for (std::uint32_t i = 0; i < n_; ++i) out.push_back(v ^ (Vertex{1} << i));
      break;
    case Family::Hamming: {
      std::uint64_t stride = 1;
      for (std::uint32_t i = 0; i < d_; ++i, stride *= n_) {
        const auto c = static_cast<std::uint32_t>((v / stride) % n_);
        const auto base = v - c * stride;
        for (std::uint32_t a = 0; a < n_; ++a) {
          if (a != c) out.push_back(static_cast<Vertex>(base + a * stride));
        }
      }
      break;
    }
    case Family::CompleteTimesRing: {
      const auto a = v % n_;
      const auto b = v / n_;
      for (std::uint32_t a2 = 0; a2 < n_; ++a2) {
        if (a2 != a) out.push_back(a2 + b * n_);
      }
      out.push_back(a + ((b + 1) % m_) * n_);
      out.push_back(a + ((b + m_ - 1) % m_) * n_);
      break;
    }
    case Family::Complete:
      for (Vertex w = 0; w < n_; ++w) {
        if (w != v) out.push_back(w);
      }
      break;
  }
}

std::vector<Vertex> Topology::neighbors(Vertex v) const {
  std::vector<Vertex> out;
  out.reserve(degree_);
  append_neighbors(v, out);
  std::sort(out.begin(), out.end());
  return out;
}

bool Topology::adjacent(Vertex u, Vertex v) const {
  check_vertex(u);
  check_vertex(v);
  if (u == v) return false;
  const auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<std::uint32_t> Topology::coords(Vertex v) const {
  check_vertex(v);
  std::vector<std::uint32_t> c;
  switch (family_) {
    case Family::Ring: c.push_back(v); break;
    case Family::Torus:
    case Family::RangeTorus:
    case Family::Hamming:
      for (std::uint32_t i = 0; i < d_; ++i) {
        c.push_back(v % n_);
        v /= n_;
      }
      break;
    case Family::Hypercube:
      for (std::uint32_t i = 0; i < n_; ++i) c.push_back((v >> i) & 1u);
      break;
    case Family::CompleteTimesRing:
      c.push_back(v % n_);
      c.push_back(v / n_);
      break;
    case Family::Complete: c.push_back(v); break;
  }
  return c;
}

Vertex Topology::index(std::span<const std::uint32_t> c) const {
  std::uint64_t radix = n_;
  std::size_t dims = d_;
  switch (family_) {
    case Family::Ring:
    case Family::Complete: dims = 1; break;
    case Family::Hypercube:
      radix = 2;
      dims = n_;
      break;
    case Family::CompleteTimesRing: dims = 2; break;
    default: break;
  }
  if (c.size() != dims) throw UsageError("index: wrong number of coordinates");
  std::uint64_t v = 0;
  std::uint64_t stride = 1;
  for (std::size_t i = 0; i < dims; ++i) {
    const std::uint64_t limit = (family_ == Family::CompleteTimesRing && i == 1) ? m_ : radix;
    if (c[i] >= limit) throw UsageError("index: coordinate out of range");
    v += c[i] * stride;
    stride *= limit;
  }
  return static_cast<Vertex>(v);
}

double Topology::log_scale() const {
  switch (family_) {
    case Family::Ring:
    case Family::Torus:
    case Family::RangeTorus:
    case Family::Hamming: return std::log(static_cast<double>(n_));
    default: return std::log(static_cast<double>(size_));
  }
}

std::size_t cpuzzle(const Topology& t, Vertex v, std::span<const Vertex> S) {
  const auto nb = t.neighbors(v);
  std::vector<Vertex> s(S.begin(), S.end());
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  std::size_t count = 0;
  for (Vertex w : s) {
    if (w >= t.size()) throw UsageError("cpuzzle: vertex out of range");
    if (std::binary_search(nb.begin(), nb.end(), w)) ++count;
  }
  return count;
}

bool is_connected(const Topology& t) {
  std::vector<char> seen(t.size(), 0);
  std::deque<Vertex> queue{0};
  seen[0] = 1;
  std::size_t reached = 1;
  std::vector<Vertex> buf;
  while (!queue.empty()) {
    const Vertex v = queue.front();
    queue.pop_front();
    buf.clear();
    t.append_neighbors(v, buf);
    for (Vertex w : buf) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        queue.push_back(w);
      }
    }
  }
  return reached == t.size();
}

}  // namespace jigsaw

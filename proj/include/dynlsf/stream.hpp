#pragma once

#include <charconv>
#include <cstdint>
#include <deque>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dynlsf/error.hpp"
#include "dynlsf/graph.hpp"
#include "dynlsf/random.hpp"

namespace dynlsf {

// Text format:
//   n <count>
//   i u v      insert
//   d u v      delete
// '#' lines and blank lines are skipped; ids are 0-indexed.
struct StreamFile {
  NodeId n = 0;
  std::vector<UpdateEvent> events;
  friend bool operator==(const StreamFile&, const StreamFile&) = default;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t j = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > j) out.push_back(line.substr(j, i - j));
  }
  return out;
}

inline std::optional<std::uint64_t> parse_uint(std::string_view tok) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) return std::nullopt;
  return v;
}

[[noreturn]] inline void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + what);
}

}  // namespace detail

inline StreamFile parse_stream(std::string_view text) {
  StreamFile s;
  bool have_header = false;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto tok = detail::split_ws(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (!have_header) {
      if (tok[0] != "n" || tok.size() != 2) detail::parse_fail(line_no, "expected header 'n <count>'");
      const auto n = detail::parse_uint(tok[1]);
      if (!n || *n == 0 || *n >= kRoot) detail::parse_fail(line_no, "bad node count");
      s.n = NodeId(*n);
      have_header = true;
      continue;
    }
    if (tok.size() != 3 || (tok[0] != "i" && tok[0] != "d"))
      detail::parse_fail(line_no, "expected 'i u v' or 'd u v'");
    const auto u = detail::parse_uint(tok[1]), v = detail::parse_uint(tok[2]);
    if (!u || !v) detail::parse_fail(line_no, "bad node id");
    if (*u >= s.n || *v >= s.n) detail::parse_fail(line_no, "node id out of range");
    if (*u == *v) detail::parse_fail(line_no, "self-loop");
    s.events.push_back(tok[0] == "i" ? UpdateEvent::insert(NodeId(*u), NodeId(*v))
                                     : UpdateEvent::erase(NodeId(*u), NodeId(*v)));
  }
  if (!have_header) detail::parse_fail(line_no, "missing header 'n <count>'");
  return s;
}

inline std::string serialize_stream(const StreamFile& s) {
  std::ostringstream out;
  out << "n " << s.n << '\n';
  for (const auto& e : s.events) out << (e.kind == UpdateEvent::Kind::Insert ? 'i' : 'd') << ' ' << e.u << ' ' << e.v << '\n';
  return out.str();
}

/// 1-based index of the first delete of an absent edge, if any.
inline std::optional<std::size_t> first_illegal_delete(const StreamFile& s) {
  DynamicMultigraph g(s.n);
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    const auto& e = s.events[i];
    if (e.kind == UpdateEvent::Kind::Delete && !g.has_edge(e.u, e.v)) return i + 1;
    g.apply_update(e);
  }
  return std::nullopt;
}

/// Largest multi-edge count reached while replaying.
inline std::uint64_t peak_edge_count(const StreamFile& s) {
  std::uint64_t m = 0, peak = 0;
  for (const auto& e : s.events) {
    m = e.kind == UpdateEvent::Kind::Insert ? m + 1 : (m ? m - 1 : 0);
    peak = std::max(peak, m);
  }
  return peak;
}

enum class StreamModel { ErFullDelete, SlidingWindow, InsertOnly };

inline std::optional<StreamModel> parse_model(std::string_view name) {
  if (name == "er_full_delete") return StreamModel::ErFullDelete;
  if (name == "sliding_window") return StreamModel::SlidingWindow;
  if (name == "insert_only") return StreamModel::InsertOnly;
  return std::nullopt;
}

struct StreamParams {
  NodeId n = 32;
  double p = 0.1;              // er_full_delete
  std::uint64_t window = 100;  // sliding_window
  std::uint64_t updates = 1000;  // sliding_window, insert_only
};

namespace detail {
inline UpdateEvent random_pair(NodeId n, Rng& rng) {
  const NodeId u = NodeId(rng.below(n));
  NodeId v = NodeId(rng.below(n - 1));
  if (v >= u) ++v;
  return UpdateEvent::insert(u, v);
}
}  // namespace detail

/// The whole sequence is fixed here, before any structure sees it.
inline StreamFile generate_stream(StreamModel model, const StreamParams& p, std::uint64_t seed) {
  if (p.n < 2) throw Error(ErrorCode::InvalidParams, "streams need n >= 2");
  Rng rng(derive_seed(seed, "stream"));
  StreamFile s;
  s.n = p.n;
  switch (model) {
    case StreamModel::ErFullDelete: {
      if (!(p.p >= 0 && p.p <= 1)) throw Error(ErrorCode::InvalidParams, "p must lie in [0,1]");
      std::vector<Edge> edges;
      for (NodeId u = 0; u < p.n; ++u)
        for (NodeId v = u + 1; v < p.n; ++v)
          if (rng.bernoulli(p.p)) edges.emplace_back(u, v);
      for (const Edge& e : edges) s.events.push_back(UpdateEvent::insert(e.u, e.v));
      rng.shuffle(edges);
      for (const Edge& e : edges) s.events.push_back(UpdateEvent::erase(e.u, e.v));
      break;
    }
    case StreamModel::SlidingWindow: {
      if (p.window < 1) throw Error(ErrorCode::InvalidParams, "window must be >= 1");
      std::deque<UpdateEvent> window;
      while (s.events.size() < p.updates) {
        const UpdateEvent ins = detail::random_pair(p.n, rng);
        s.events.push_back(ins);
        window.push_back(ins);
        if (window.size() > p.window && s.events.size() < p.updates) {
          s.events.push_back(UpdateEvent::erase(window.front().u, window.front().v));
          window.pop_front();
        }
      }
      break;
    }
    case StreamModel::InsertOnly:
      for (std::uint64_t i = 0; i < p.updates; ++i) s.events.push_back(detail::random_pair(p.n, rng));
      break;
  }
  return s;
}

}  // namespace dynlsf

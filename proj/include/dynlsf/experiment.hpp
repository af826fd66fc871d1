#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "dynlsf/dynamic_ldd.hpp"
#include "dynlsf/error.hpp"
#include "dynlsf/forest.hpp"
#include "dynlsf/hierarchy.hpp"
#include "dynlsf/oracle.hpp"
#include "dynlsf/spanner.hpp"
#include "dynlsf/stream.hpp"

namespace dynlsf {

enum class Structure { Ldd, Lst, Spanner };
enum class MetricsFormat { Csv, Jsonl };

inline std::string_view to_string(Structure s) {
  switch (s) {
    case Structure::Ldd: return "ldd";
    case Structure::Lst: return "lst";
    case Structure::Spanner: return "spanner";
  }
  return "?";
}

inline std::optional<Structure> parse_structure(std::string_view s) {
  if (s == "ldd") return Structure::Ldd;
  if (s == "lst") return Structure::Lst;
  if (s == "spanner") return Structure::Spanner;
  return std::nullopt;
}

struct ExperimentConfig {
  Structure structure = Structure::Ldd;
  std::uint64_t seed = 0;
  std::uint64_t verify_every = 0;  // 0 = never
  bool timing = true;              // false: wall_time_ns is null
  // ldd
  double beta = 0.4;
  int d = 1;
  // lst
  char regime = 'a';
  double t = 4;
  std::optional<std::uint64_t> m_hat;  // regime a; default = peak edge count of the stream
  // spanner
  int k = 2;
  double c = 3;
  SpannerRule rule = SpannerRule::OnePerCluster;
};

struct MetricsRecord {
  std::uint64_t update_index = 0;
  Structure structure = Structure::Ldd;
  std::optional<double> inter_cluster_fraction;
  std::optional<std::int64_t> max_cluster_radius;
  std::optional<std::uint64_t> forest_total_stretch;
  std::optional<double> forest_avg_stretch;
  std::optional<std::uint64_t> spanner_size;
  std::optional<double> spanner_worst_stretch;
  std::optional<std::uint64_t> wall_time_ns;
  std::optional<std::uint64_t> restarts;
  std::optional<std::uint64_t> propagation_count;
};

struct Violation {
  std::uint64_t update_index = 0;  // 1-based; the stream prefix of this length reproduces it
  std::string what;
};

struct ExperimentResult {
  std::vector<MetricsRecord> rows;
  std::optional<Violation> violation;
  std::uint64_t total_ns = 0;
};

inline HierarchyConfig hierarchy_config_for(const StreamFile& s, const ExperimentConfig& cfg) {
  if (cfg.regime == 'b') return HierarchyConfig::regime_b(s.n, cfg.t, cfg.seed);
  if (cfg.regime != 'a') throw Error(ErrorCode::InvalidParameters, "regime must be a or b");
  const std::uint64_t m_hat = std::max<std::uint64_t>(2, cfg.m_hat.value_or(peak_edge_count(s)));
  return HierarchyConfig::regime_a(s.n, m_hat, cfg.seed);
}

/// Cluster strong radius read off the tree: level(x) - level(c(x)) is the
/// G-distance from x to its center along a path inside the cluster.
inline std::int64_t tree_radius(const EsTree& t) {
  std::int64_t r = 0;
  for (NodeId x = 0; x < t.node_count(); ++x) r = std::max(r, t.level(x) - t.level(t.center(x)));
  return r;
}

namespace detail {

inline std::optional<std::string> verify_ldd(const DynLdd& l) {
  const Clustering ref = static_partition(l.node_count(), l.inner_skeleton(), l.tree().shifts());
  if (ref.center != l.centers() || ref.level != l.tree().levels())
    return std::string("decremental clustering differs from a from-scratch partition");
  const auto rep = oracle::verify_decomposition(l.node_count(), l.graph().snapshot_skeleton(), l.centers(),
                                                l.radius_bound());
  if (!rep.ok) return "cluster radius " + std::to_string(rep.max_radius) + " exceeds bound";
  return std::nullopt;
}

inline std::optional<std::string> verify_lst(const LddHierarchy& h) {
  const Forest& f = h.current_forest();
  const auto sk = h.graph(0).snapshot_skeleton();
  const auto check = oracle::check_forest(h.node_count(), sk, f.edge_list());
  if (!check.ok()) return std::string("forest is not a component-preserving spanning forest");
  const auto a = h.assemble_static();
  if (!(a.forest == f)) return std::string("incremental forest differs from static assembly");
  for (int i = 0; i <= h.k(); ++i)
    if (a.prov[i] != h.provenance(i)) return "contracted graph G_" + std::to_string(i) + " differs from static assembly";
  const auto sc = h.check_same_cluster_bound();
  if (!sc.ok) return "same-cluster bound violated at level " + std::to_string(sc.level);
  if (oracle::stretch_by_distances(h.node_count(), sk, f.edge_list()) != h.measure_stretch(f).total)
    return std::string("stretch disagrees with the oracle");
  return std::nullopt;
}

}  // namespace detail

inline ExperimentResult run_experiment(const StreamFile& stream, const ExperimentConfig& cfg) {
  ExperimentResult res;
  std::optional<DynLdd> ldd;
  std::optional<LddHierarchy> lst;
  std::optional<BucketedSpanner> sp;
  switch (cfg.structure) {
    case Structure::Ldd: ldd.emplace(stream.n, cfg.beta, cfg.seed, cfg.d); break;
    case Structure::Lst: lst.emplace(stream.n, hierarchy_config_for(stream, cfg)); break;
    case Structure::Spanner: sp.emplace(stream.n, cfg.k, cfg.c, cfg.seed, cfg.rule); break;
  }
  res.rows.reserve(stream.events.size());

  for (std::size_t i = 0; i < stream.events.size(); ++i) {
    const UpdateEvent& ev = stream.events[i];
    MetricsRecord row;
    row.update_index = i + 1;
    row.structure = cfg.structure;
    std::uint64_t propagated = 0;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      switch (cfg.structure) {
        case Structure::Ldd: ldd->process_update(ev); break;
        case Structure::Lst: propagated = lst->process_update(ev).propagation_count(); break;
        case Structure::Spanner: sp->fully_dynamic_update(ev); break;
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DeleteAbsentEdge)
        throw Error(ErrorCode::IllegalDelete, "illegal delete @" + std::to_string(i + 1) + ": " + e.what());
      throw;
    }
    const auto ns = std::uint64_t(
        std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0).count());
    res.total_ns += ns;
    if (cfg.timing) row.wall_time_ns = ns;

    const bool verify = cfg.verify_every > 0 && (i + 1) % cfg.verify_every == 0;
    std::optional<std::string> bad;
    switch (cfg.structure) {
      case Structure::Ldd:
        row.inter_cluster_fraction = ldd->inter_cluster_fraction();
        row.max_cluster_radius = tree_radius(ldd->tree());
        row.restarts = ldd->restarts();
        if (verify) bad = detail::verify_ldd(*ldd);
        break;
      case Structure::Lst: {
        const auto st = lst->measure_stretch(lst->current_forest());
        row.forest_total_stretch = st.total;
        row.forest_avg_stretch = st.average;
        row.restarts = lst->restarts();
        row.propagation_count = propagated;
        if (verify) bad = detail::verify_lst(*lst);
        break;
      }
      case Structure::Spanner: {
        row.spanner_size = sp->size();
        if (verify) {
          const auto h = sp->edges();
          const auto chk = verify_spanner(stream.n, sp->graph().snapshot_skeleton(), h, cfg.k);
          row.spanner_worst_stretch = chk.worst_stretch;
          if (!chk.ok) bad = "spanner stretch " + std::to_string(chk.worst_stretch) + " exceeds 2k-1";
          for (const Edge& e : h)
            if (!bad && !sp->graph().has_edge(e.u, e.v)) bad = std::string("spanner edge not in the graph");
        }
        break;
      }
    }
    res.rows.push_back(row);
    if (bad) {
      res.violation = Violation{i + 1, *bad};
      break;
    }
  }
  return res;
}

// ---- metrics output

/// RFC 4180 field quoting.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

inline std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline constexpr const char* kMetricsColumns[] = {
    "update_index",   "structure",     "inter_cluster_fraction", "max_cluster_radius",
    "forest_total_stretch", "forest_avg_stretch", "spanner_size", "spanner_worst_stretch",
    "wall_time_ns",   "restarts",      "propagation_count"};

inline void write_csv_header(std::ostream& out) {
  bool first = true;
  for (const char* c : kMetricsColumns) {
    if (!first) out << ',';
    out << csv_field(c);
    first = false;
  }
  out << "\r\n";
}

inline void write_csv_row(std::ostream& out, const MetricsRecord& r) {
  auto opt = [](const auto& v) -> std::string {
    if (!v) return "";
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(*v)>>) return format_double(*v);
    else return std::to_string(*v);
  };
  const std::string fields[] = {std::to_string(r.update_index),
                                std::string(to_string(r.structure)),
                                opt(r.inter_cluster_fraction),
                                opt(r.max_cluster_radius),
                                opt(r.forest_total_stretch),
                                opt(r.forest_avg_stretch),
                                opt(r.spanner_size),
                                opt(r.spanner_worst_stretch),
                                opt(r.wall_time_ns),
                                opt(r.restarts),
                                opt(r.propagation_count)};
  bool first = true;
  for (const auto& f : fields) {
    if (!first) out << ',';
    out << csv_field(f);
    first = false;
  }
  out << "\r\n";
}

inline nlohmann::ordered_json to_json(const MetricsRecord& r) {
  nlohmann::ordered_json j;
  auto put = [&](const char* key, const auto& v) {
    if (!v) {
      j[key] = nullptr;
      return;
    }
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(*v)>>) {
      // JSON has no infinity; keep it as a string
      if (std::isinf(*v)) j[key] = format_double(*v);
      else j[key] = *v;
    } else {
      j[key] = *v;
    }
  };
  j["update_index"] = r.update_index;
  j["structure"] = std::string(to_string(r.structure));
  put("inter_cluster_fraction", r.inter_cluster_fraction);
  put("max_cluster_radius", r.max_cluster_radius);
  put("forest_total_stretch", r.forest_total_stretch);
  put("forest_avg_stretch", r.forest_avg_stretch);
  put("spanner_size", r.spanner_size);
  put("spanner_worst_stretch", r.spanner_worst_stretch);
  put("wall_time_ns", r.wall_time_ns);
  put("restarts", r.restarts);
  put("propagation_count", r.propagation_count);
  return j;
}

inline void write_metrics(std::ostream& out, const std::vector<MetricsRecord>& rows, MetricsFormat fmt) {
  if (fmt == MetricsFormat::Csv) {
    write_csv_header(out);
    for (const auto& r : rows) write_csv_row(out, r);
  } else {
    for (const auto& r : rows) out << to_json(r).dump() << '\n';
  }
}

inline nlohmann::ordered_json repro_bundle(const ExperimentConfig& cfg, const Violation& v) {
  nlohmann::ordered_json j;
  j["seed"] = cfg.seed;
  j["structure"] = std::string(to_string(cfg.structure));
  j["prefix_length"] = v.update_index;
  j["violation"] = v.what;
  j["beta"] = cfg.beta;
  j["d"] = cfg.d;
  j["regime"] = std::string(1, cfg.regime);
  j["t"] = cfg.t;
  if (cfg.m_hat) j["m_hat"] = *cfg.m_hat;
  j["k"] = cfg.k;
  j["c"] = cfg.c;
  return j;
}

}  // namespace dynlsf

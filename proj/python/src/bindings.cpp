#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dancewalk/algorithms.hpp"
#include "dancewalk/cuckoo.hpp"
#include "dancewalk/harness.hpp"
#include "dancewalk/oracle.hpp"
#include "dancewalk/script.hpp"

namespace py = pybind11;
using namespace dancewalk;

namespace {

Variant variant_from(const std::string& name) {
  if (auto v = parse_variant(name)) return *v;
  throw ConfigError("unknown variant '" + name + "'");
}

harness::WorkloadKind workload_from(const std::string& name) {
  const auto kind = harness::parse_workload(name);
  if (!kind || *kind == harness::WorkloadKind::File) throw ConfigError("unknown workload '" + name + "'");
  return *kind;
}

py::dict report_dict(const InsertReport& r) {
  py::dict d;
  d["source"] = r.source;
  d["flips"] = r.flips;
  d["walk_attempts"] = r.walk_attempts;
  d["walk_steps"] = r.walk_steps;
  d["early_exit"] = r.early_exit;
  d["volunteer_used"] = r.volunteer_used;
  return d;
}

py::dict outcome_dict(const OperationOutcome& o) {
  py::dict d;
  d["kickouts"] = o.kickouts;
  d["walk_attempts"] = o.walk_attempts;
  d["stashed"] = o.stashed;
  d["updated"] = o.updated;
  d["found"] = o.found;
  d["rebuild_moves"] = o.rebuild_moves;
  d["d_writes"] = o.d_writes;
  d["rebuild_d_writes"] = o.rebuild_d_writes;
  return d;
}

class PyCuckoo {
 public:
  PyCuckoo(std::size_t n, double epsilon, std::size_t stash, std::uint64_t seed, std::uint64_t hash_seed,
           const std::string& provider)
      : table_(make_config(n, epsilon, stash, seed), make(provider, hash_seed, n)) {}

  py::dict insert(Key k, Value v) { return outcome_dict(table_.insert(k, v)); }
  py::dict erase(Key k) { return outcome_dict(table_.erase(k)); }
  std::optional<Value> query(Key k) const { return table_.query(k); }
  std::size_t size() const { return table_.size(); }
  std::size_t stash_size() const { return table_.stash().size(); }
  std::uint64_t phase() const { return table_.phase_index(); }
  std::pair<VertexId, VertexId> bins(Key k) const {
    const BinPair p = table_.provider().bins(k);
    return {p.first, p.second};
  }
  py::dict stats() const {
    const TableStats& s = table_.stats();
    py::dict d;
    d["operations"] = s.operations;
    d["inserts"] = s.inserts;
    d["deletes"] = s.deletes;
    d["placements"] = s.placements;
    d["kickout_histogram"] = s.kickout_histogram;
    d["max_kickouts"] = s.max_kickouts;
    d["stash_high_water"] = s.stash_high_water;
    d["rebuild_moves"] = s.rebuild_moves;
    d["max_d_writes_per_op"] = s.max_d_writes_per_op;
    d["phases_completed"] = s.phases_completed;
    return d;
  }

 private:
  static TableConfig make_config(std::size_t n, double epsilon, std::size_t stash, std::uint64_t seed) {
    TableConfig c;
    c.n = n;
    c.epsilon = epsilon;
    c.stash = stash;
    c.algo.n = n;
    c.algo.seed = seed;
    return c;
  }
  static std::shared_ptr<const HashPairProvider> make(const std::string& kind, std::uint64_t seed, std::size_t n) {
    if (kind == "seeded") return seeded_provider(seed, n);
    if (kind == "tabulation") return tabulation_provider(seed, n);
    throw ConfigError("unknown provider '" + kind + "'");
  }

  CuckooTable table_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dancing-walk forest orientation and cuckoo hashing";

  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  static py::exception<StructuralError> structural_error(m, "StructuralError", PyExc_RuntimeError);
  static py::exception<FailureError> failure_error(m, "FailureError", PyExc_RuntimeError);
  static py::exception<ViabilityViolation> viability(m, "ViabilityViolation", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const StructuralError& e) {
      py::set_error(structural_error, e.what());
    } catch (const FailureError& e) {
      py::set_error(failure_error, e.what());
    } catch (const ViabilityViolation& e) {
      py::set_error(viability, e.what());
    } catch (const ParseError& e) {
      py::set_error(PyExc_ValueError, e.what());
    }
  });

  m.def("walk_length", &walk_length, py::arg("n"), py::arg("k") = 2, py::arg("c") = 4.0);
  m.def("attempt_cap", &attempt_cap, py::arg("n"), py::arg("d") = 4.0);

  py::class_<Orienter>(m, "Orienter")
      .def(py::init([](std::size_t n, const std::string& variant, std::uint32_t k, double c, double d,
                       std::uint64_t seed) {
             AlgoConfig cfg;
             cfg.variant = variant_from(variant);
             cfg.n = n;
             cfg.k = k;
             cfg.c = c;
             cfg.d = d;
             cfg.seed = seed;
             return Orienter(cfg);
           }),
           py::arg("n"), py::arg("variant") = "dancing-rank", py::arg("k") = 2, py::arg("c") = 4.0,
           py::arg("d") = 4.0, py::arg("seed") = 0)
      .def("insert", [](Orienter& o, VertexId u, VertexId v) { return report_dict(o.insert(u, v)); })
      .def("out_degree", [](const Orienter& o, VertexId v) { return o.forest().out_degree(v); })
      .def("out_edges",
           [](const Orienter& o, VertexId v) {
             std::vector<VertexId> heads;
             const auto& f = o.forest();
             for (EdgeId id : f.primary_out(v)) heads.push_back(f.edge(id).other(v));
             if (f.secondary_out(v) != kNoEdge) heads.push_back(f.edge(f.secondary_out(v)).other(v));
             return heads;
           })
      .def("rank", [](const Orienter& o, VertexId v) { return o.ranks().rank_of(v); })
      .def("check", [](const Orienter& o) { return oracle::check_orientation(o.forest()).violations; })
      .def_property_readonly("max_out_degree", &Orienter::max_out_degree)
      .def_property_readonly("total_flips", [](const Orienter& o) { return o.forest().total_flips(); })
      .def_property_readonly("walk_cap", &Orienter::walk_cap)
      .def_property_readonly("attempts", &Orienter::attempts)
      .def_property_readonly("insertions", &Orienter::insertions);

  py::class_<PyCuckoo>(m, "CuckooTable")
      .def(py::init<std::size_t, double, std::size_t, std::uint64_t, std::uint64_t, const std::string&>(),
           py::arg("n"), py::arg("epsilon") = 0.5, py::arg("stash") = 0, py::arg("seed") = 0,
           py::arg("hash_seed") = 0, py::arg("provider") = "seeded")
      .def("insert", &PyCuckoo::insert, py::arg("key"), py::arg("value"))
      .def("erase", &PyCuckoo::erase, py::arg("key"))
      .def("query", &PyCuckoo::query, py::arg("key"))
      .def("bins", &PyCuckoo::bins, py::arg("key"))
      .def("stats", &PyCuckoo::stats)
      .def("__len__", &PyCuckoo::size)
      .def("__contains__", [](const PyCuckoo& t, Key k) { return t.query(k).has_value(); })
      .def_property_readonly("stash_size", &PyCuckoo::stash_size)
      .def_property_readonly("phase", &PyCuckoo::phase);

  m.def("generate_workload",
        [](const std::string& kind, std::size_t n, std::uint64_t seed) {
          return harness::generate_workload({workload_from(kind), n, seed, {}});
        },
        py::arg("kind"), py::arg("n"), py::arg("seed") = 0);

  m.def("check_viability",
        [](const std::vector<std::pair<VertexId, VertexId>>& edges, std::size_t n) {
          return oracle::check_viability(edges, n).min_stash_needed;
        },
        py::arg("edges"), py::arg("n"), "Smallest stash that makes the edge multiset orientable with out-degree 1.");

  m.def("generate_script",
        [](std::size_t n, double load, std::size_t mutations, std::size_t query_every, std::uint64_t seed) {
          py::list ops;
          for (const ScriptOp& op : generate_script({n, load, mutations, query_every, seed})) {
            const char* kind = op.kind == OpKind::Insert ? "I" : op.kind == OpKind::Delete ? "D" : "Q";
            ops.append(py::make_tuple(kind, op.key, op.value));
          }
          return ops;
        },
        py::arg("n"), py::arg("load") = 0.2, py::arg("mutations") = 1000, py::arg("query_every") = 4,
        py::arg("seed") = 0);
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rulenet/config.hpp"
#include "rulenet/gw.hpp"
#include "rulenet/network.hpp"
#include "rulenet/stats.hpp"
#include "rulenet/theory.hpp"
#include "rulenet/tree.hpp"

namespace py = pybind11;
using namespace rulenet;

namespace {

py::dict tree_dict(const RuleTree& tree) {
  py::list red;
  py::list prim;
  for (const auto& level : tree.red) {
    py::list words;
    for (const Word& w : level) words.append(w.str());
    red.append(words);
  }
  for (const auto& level : tree.prim) {
    py::list words;
    for (const PrimVertex& v : level) words.append(v.word.str());
    prim.append(words);
  }
  const TreeHeight h = tree.height();
  py::dict out;
  out["kind"] = to_string(tree.kind);
  out["n_max"] = tree.n_max;
  out["red"] = red;
  out["prim"] = prim;
  out["level_sizes"] = tree.level_sizes();
  out["prim_counts"] = tree.prim_counts();
  out["height"] = h.level;
  out["censored"] = h.censored;
  return out;
}

py::dict report_dict(const StatsReport& r) {
  py::list heights;
  for (const HeightBin& b : r.heights) heights.append(py::make_tuple(b.height, b.count, b.censored));
  py::dict out;
  out["mean_v"] = r.mean_v;
  out["mean_prim"] = r.mean_prim;
  out["sd_v"] = r.sd_v;
  out["sd_prim"] = r.sd_prim;
  out["mean_log_v"] = r.mean_log_v;
  out["surviving_runs"] = r.surviving_runs;
  out["log_mean_v"] = r.log_mean_v;
  out["log_mean_v_surviving"] = r.log_mean_v_surviving;
  out["heights"] = heights;
  out["censored"] = r.censored;
  out["extinction_cdf"] = r.extinction_cdf;
  out["n0"] = r.n0;
  out["n0p"] = r.n0p;
  out["m0"] = r.m0;
  out["m0p"] = r.m0p;
  out["jensen_violations"] = jensen_violations(r);
  return out;
}

py::dict roots_dict(const PhaseRoots& r) {
  py::dict out;
  out["y_phi"] = r.y_phi;
  out["zp_phi"] = r.zp_phi;
  out["z_phi"] = r.z_phi;
  out["z_star"] = r.z_star;
  out["phi_max"] = r.phi_max;
  out["phase_a_empty"] = r.phase_a_empty;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Random rule networks of linear polymers";

  py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);
  py::register_exception<MemoryBudgetError>(m, "MemoryBudgetError", PyExc_MemoryError);
  py::register_exception<EnsembleBudgetError>(m, "EnsembleBudgetError", PyExc_MemoryError);

  py::enum_<Kind>(m, "Kind")
      .value("Anabolic", Kind::Anabolic)
      .value("Catabolic", Kind::Catabolic);

  py::class_<ModelParams>(m, "ModelParams")
      .def_static("model_one", &ModelParams::model_one, py::arg("alphabet_size"), py::arg("p"),
                  py::arg("q"))
      .def_static("model_two", &ModelParams::model_two, py::arg("alphabet_size"), py::arg("p"),
                  py::arg("q"), py::arg("z"))
      .def_readwrite("p", &ModelParams::p)
      .def_readwrite("q", &ModelParams::q)
      .def_readonly("z", &ModelParams::z)
      .def_readwrite("exponent_shift", &ModelParams::exponent_shift)
      .def_property_readonly("alphabet_size", [](const ModelParams& p) { return p.alphabet.size(); })
      .def_property_readonly("foods",
                             [](const ModelParams& p) {
                               std::vector<std::string> out;
                               for (const Word& f : p.foodset.foods()) out.push_back(f.str());
                               return out;
                             })
      .def("with_z", &ModelParams::with_z)
      .def("with_atom_foods",
           [](const ModelParams& p) { return p.with_foodset(Foodset::atoms(p.alphabet)); })
      .def("validate", &ModelParams::validate);

  m.def("acceptance", &acceptance, py::arg("params"), py::arg("kind"), py::arg("level"));
  m.def(
      "build_tree",
      [](Kind kind, const ModelParams& params, std::uint64_t seed, int n_max,
         std::size_t vertex_budget) {
        BuildOptions opts;
        opts.vertex_budget = vertex_budget;
        return tree_dict(build_tree(kind, params, seed, n_max, opts));
      },
      py::arg("kind"), py::arg("params"), py::arg("seed"), py::arg("n_max"),
      py::arg("vertex_budget") = std::size_t{100'000'000});

  m.def(
      "run_ensemble",
      [](Kind kind, const ModelParams& params, int sample_size, int n_max,
         std::uint64_t master_seed, int threads) {
        EnsembleConfig c;
        c.kind = kind;
        c.params = params;
        c.sample_size = sample_size;
        c.n_max = n_max;
        c.master_seed = master_seed;
        c.threads = threads;
        StatsReport r;
        {
          py::gil_scoped_release release;
          r = run_ensemble(c);
        }
        return report_dict(r);
      },
      py::arg("kind"), py::arg("params"), py::arg("sample_size"), py::arg("n_max"),
      py::arg("master_seed") = 1, py::arg("threads") = 1);

  m.def(
      "theory_curves",
      [](Kind kind, const ModelParams& params, int n_max) {
        const TheoryCurves t = theory_curves(kind, params, n_max);
        py::dict out;
        out["plain"] = t.plain;
        out["k0"] = t.k0;
        out["k1"] = t.k1;
        out["prim"] = t.prim;
        return out;
      },
      py::arg("kind"), py::arg("params"), py::arg("n_max"));

  m.def(
      "anabolic_lemma_roots",
      [](int alphabet_size, double food_rate) {
        return roots_dict(phase_roots(PhaseSpec::anabolic_lemma(alphabet_size, food_rate)));
      },
      py::arg("alphabet_size"), py::arg("food_rate"));
  m.def(
      "catabolic_lemma_roots",
      [](int alphabet_size, double q) {
        return roots_dict(phase_roots(PhaseSpec::catabolic_lemma(alphabet_size, q)));
      },
      py::arg("alphabet_size"), py::arg("q"));
  m.def(
      "psi",
      [](Kind kind, const ModelParams& params, double z) {
        return psi(PhaseSpec{kind, params, 1.0}, z);
      },
      py::arg("kind"), py::arg("params"), py::arg("z"));
  m.def(
      "phi",
      [](Kind kind, const ModelParams& params, double z) {
        return phi(PhaseSpec{kind, params, 1.0}, z);
      },
      py::arg("kind"), py::arg("params"), py::arg("z"));
  m.def("n0_model_one", &n0_model_one, py::arg("alphabet_size"), py::arg("p"));

  py::class_<GwSchedule>(m, "GwSchedule")
      .def(py::init<Kind, const ModelParams&, int>(), py::arg("kind"), py::arg("params"),
           py::arg("max_level") = GwSchedule::kDefaultMaxLevel)
      .def("progeny_prob", &GwSchedule::progeny_prob)
      .def("mean_level_size", [](const GwSchedule& s, int n) { return mean_level_size(s, n); })
      .def("corrected_mean_k0", [](const GwSchedule& s, int n) { return corrected_mean_k0(s, n); })
      .def("extinction_prob", [](const GwSchedule& s, int n) { return extinction_prob(s, n); })
      .def("expected_log_size",
           [](const GwSchedule& s, int n, bool atoms) {
             return expected_log_size(s, n, atoms ? GwStart::Atoms : GwStart::SingleRoot).value;
           },
           py::arg("n"), py::arg("atoms") = false);

  m.def(
      "component_counts",
      [](const ModelParams& params, std::uint64_t seed, int n_max) {
        const ComponentCounts c = anabolic_component_counts(params, seed, n_max);
        py::dict out;
        out["words"] = c.words;
        out["isolated"] = c.isolated;
        out["two_molecule"] = c.two_molecule;
        out["open_flagged"] = c.open_flagged;
        return out;
      },
      py::arg("params"), py::arg("seed"), py::arg("n_max"));

  m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("index"));
  m.def("config_hash", &config_hash, py::arg("text"));
}

#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "discordlab/analysis.hpp"
#include "discordlab/cli.hpp"
#include "discordlab/discord.hpp"
#include "discordlab/error.hpp"
#include "discordlab/io.hpp"
#include "discordlab/rng.hpp"
#include "discordlab/state_spec.hpp"
#include "discordlab/tomo.hpp"

namespace py = pybind11;
using namespace discordlab;

namespace {

BellKind kind_of(const std::string& s) {
  if (s == "phi") return BellKind::PhiPlus;
  if (s == "psi") return BellKind::PsiPlus;
  throw Error(ErrorCode::BadInput, "kind must be 'phi' or 'psi'");
}

Family family_of(const std::string& s) {
  if (s == "werner") return Family::Werner;
  if (s == "damped") return Family::Damped;
  throw Error(ErrorCode::BadInput, "family must be 'werner' or 'damped'");
}

Party party_of(const std::string& s) {
  if (s == "a") return Party::A;
  if (s == "b") return Party::B;
  throw Error(ErrorCode::BadInput, "party must be 'a' or 'b'");
}

Combiner combiner_of(const std::string& s) {
  if (s == "draw") return Combiner::RandomDraw;
  if (s == "mean") return Combiner::Mean;
  throw Error(ErrorCode::BadInput, "combiner must be 'draw' or 'mean'");
}

// Counts cross the boundary as the same dict layout as the JSON records.
py::dict counts_to_py(const CountRecord& c) {
  py::dict d;
  d["labels"] = c.labels;
  d["counts"] = c.counts;
  d["n_total"] = c.n_total;
  d["seed"] = c.seed ? py::cast(*c.seed) : py::none();
  return d;
}

CountRecord counts_from_py(const py::dict& d) {
  if (!d.contains("labels") || !d.contains("counts"))
    throw Error(ErrorCode::BadInput, "count record: needs 'labels' and 'counts'");
  auto labels = d["labels"].cast<std::vector<std::string>>();
  auto counts = d["counts"].cast<std::vector<std::int64_t>>();
  std::optional<std::uint64_t> seed;
  if (d.contains("seed") && !d["seed"].is_none()) seed = d["seed"].cast<std::uint64_t>();
  CountRecord r = make_count_record(std::move(labels), std::move(counts), seed);
  if (d.contains("n_total") && !d["n_total"].is_none()) {
    r.n_total = d["n_total"].cast<std::int64_t>();
    validate(r);
  }
  return r;
}

py::dict estimate_to_py(const DiscordEstimate& e) {
  py::dict d;
  d["method"] = to_string(e.method);
  d["discord"] = e.discord;
  d["mutual_info"] = e.mutual_info;
  d["classical_corr"] = e.classical_corr;
  d["optimal_axis"] = e.optimal_axis ? py::cast(std::pair{e.optimal_axis->theta, e.optimal_axis->phi}) : py::none();
  d["fitted_p"] = e.fitted_p ? py::cast(*e.fitted_p) : py::none();
  d["degenerate"] = e.degenerate;
  d["clamped"] = e.clamped;
  return d;
}

Quantity quantity_of(const std::string& name, const std::string& family, const std::string& kind,
                     const std::optional<ComplexMatrix>& target) {
  if (name == "purity") return Quantity::purity();
  if (name == "discord-tt") return Quantity::discord_tt();
  if (name == "discord-pt") return Quantity::discord_pt();
  if (name == "optimal-angle") return Quantity::optimal_angle();
  if (name == "discord-xmodel") return Quantity::discord_xmodel(family_of(family), kind_of(kind));
  if (name == "purity-xmodel") return Quantity::purity_xmodel(family_of(family), kind_of(kind));
  if (name == "fidelity-to") {
    if (!target) throw Error(ErrorCode::BadInput, "fidelity-to needs a target state");
    return Quantity::fidelity_to(DensityMatrix(*target));
  }
  throw Error(ErrorCode::BadInput, "unknown quantity '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-qubit discord estimation from coincidence counts";
  m.attr("__version__") = version();

  static py::exception<Error> error_type(m, "DiscordlabError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error_type.ptr(), (e.qualified_name() + ": " + e.what()).c_str());
    }
  });

  m.def("bell", [](const std::string& kind) { return bell(kind_of(kind)).matrix(); }, py::arg("kind") = "phi");
  m.def("werner", [](double p, const std::string& kind) { return werner(MixingParam(p), kind_of(kind)).matrix(); },
        py::arg("p"), py::arg("kind") = "phi");
  m.def("phase_damped",
        [](double p, const std::string& kind) { return phase_damped(MixingParam(p), kind_of(kind)).matrix(); },
        py::arg("p"), py::arg("kind") = "phi");
  m.def("x_state", [](double c1, double c2, double c3) { return x_state({c1, c2, c3}).matrix(); });
  m.def("state", [](const std::string& spec) { return parse_state_spec(spec).state.matrix(); }, py::arg("spec"),
        "Density matrix for a state spec such as 'werner:phi:2/3'.");
  m.def("purity_to_p", [](double mu, const std::string& family) { return purity_to_p(mu, family_of(family)).value(); },
        py::arg("mu"), py::arg("family"));
  m.def("p_to_purity", [](double p, const std::string& family) { return p_to_purity(MixingParam(p), family_of(family)); },
        py::arg("p"), py::arg("family"));

  m.def("purity", [](const ComplexMatrix& rho) { return purity(DensityMatrix(rho)); });
  m.def(
      "fidelity",
      [](const ComplexMatrix& rho, const ComplexMatrix& sigma, bool root) {
        return fidelity(DensityMatrix(rho), DensityMatrix(sigma),
                        root ? FidelityConvention::Root : FidelityConvention::Squared);
      },
      py::arg("rho"), py::arg("sigma"), py::arg("root") = false);
  m.def("entropy", [](const ComplexMatrix& rho) { return entropy(DensityMatrix(rho)); });
  m.def("mutual_information", [](const ComplexMatrix& rho) { return mutual_information(DensityMatrix(rho)); });

  m.def(
      "simulate_counts",
      [](const ComplexMatrix& rho, std::int64_t n_total, std::uint64_t seed, bool exact) {
        const auto probs = born_probabilities(DensityMatrix(rho), standard_projector_set());
        return counts_to_py(exact ? exact_counts(probs, n_total) : sample_counts(probs, n_total, seed));
      },
      py::arg("rho"), py::arg("n_total") = 40000, py::arg("seed") = 0, py::arg("exact") = false,
      "Counts on the 16 standard projectors: Poisson samples, or rounded expectations when exact.");
  m.def(
      "ml_reconstruct",
      [](const py::dict& counts, std::uint64_t seed) {
        MlConfig cfg;
        cfg.seed = seed;
        return ml_reconstruct(counts_from_py(counts), cfg).rho.matrix();
      },
      py::arg("counts"), py::arg("seed") = 0);

  m.def(
      "discord",
      [](const ComplexMatrix& rho, const std::string& party) {
        return estimate_to_py(discord_full(DensityMatrix(rho), party_of(party)));
      },
      py::arg("rho"), py::arg("party") = "a");
  m.def(
      "discord_analytic",
      [](const std::string& family, double p) { return discord_analytic(family_of(family), MixingParam(p)); },
      py::arg("family"), py::arg("p"));
  m.def(
      "estimate_p",
      [](const py::dict& counts, const std::string& family, const std::string& kind, std::uint64_t seed,
         const std::string& combiner) {
        return estimate_p(counts_from_py(counts), family_of(family), kind_of(kind), seed, combiner_of(combiner)).value();
      },
      py::arg("counts"), py::arg("family"), py::arg("kind") = "phi", py::arg("seed") = 0, py::arg("combiner") = "draw");
  m.def(
      "discord_xmodel",
      [](const py::dict& counts, const std::string& family, const std::string& kind, std::uint64_t seed) {
        return estimate_to_py(discord_xmodel(counts_from_py(counts), family_of(family), kind_of(kind), seed));
      },
      py::arg("counts"), py::arg("family"), py::arg("kind") = "phi", py::arg("seed") = 0);

  m.def(
      "mc_uncertainty",
      [](const py::dict& counts, const std::vector<std::string>& quantities, int n_samples, std::uint64_t seed,
         const std::string& family, const std::string& kind, const std::optional<ComplexMatrix>& target) {
        std::vector<Quantity> qs;
        for (const auto& q : quantities) qs.push_back(quantity_of(q, family, kind, target));
        std::vector<py::dict> out;
        for (const auto& u : mc_uncertainty(counts_from_py(counts), qs, n_samples, seed)) {
          py::dict d;
          d["quantity"] = u.quantity;
          d["mean"] = u.mean;
          d["std"] = u.std;
          d["n_samples"] = u.n_samples;
          out.push_back(std::move(d));
        }
        return out;
      },
      py::arg("counts"), py::arg("quantities"), py::arg("n_samples") = kDefaultMcSamples, py::arg("seed") = 0,
      py::arg("family") = "werner", py::arg("kind") = "phi", py::arg("target") = py::none());

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command-line tool in-process; returns (exit code, stdout, stderr).");
}

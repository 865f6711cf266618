#include "discordlab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>

#include "discordlab/analysis.hpp"
#include "discordlab/discord.hpp"
#include "discordlab/error.hpp"
#include "discordlab/io.hpp"
#include "discordlab/rng.hpp"
#include "discordlab/state_spec.hpp"
#include "discordlab/tomo.hpp"

namespace discordlab::cli {

namespace {

namespace fs = std::filesystem;

struct Config {
  std::uint64_t seed = 0;
  std::int64_t n_total = 40000;
  int mc = -1;  // unset: command default
  std::string out;
  std::string format = "auto";
  bool exact = false;
  bool fidelity_root = false;
  std::string combiner = "draw";
  std::string family;  // unset: inferred from a state spec, else werner
  std::string kind;    // unset: inferred from a state spec, else phi
};

[[noreturn]] void bad_input(const std::string& what) { throw Error(ErrorCode::BadInput, what); }

int mc_or(const Config& cfg, int fallback) { return cfg.mc >= 0 ? cfg.mc : fallback; }

RunMeta meta(const Config& cfg, int n_mc) { return {cfg.seed, cfg.n_total, n_mc}; }

std::string resolve_format(const Config& cfg, const char* fallback, bool csv_ok) {
  const std::string f = cfg.format == "auto" ? fallback : cfg.format;
  if (f == "csv" && !csv_ok) bad_input("this command writes JSON only");
  return f;
}

void emit(const Config& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty())
    out << text;
  else
    write_text_file(cfg.out, text);
}

PipelineOptions pipeline_options(const Config& cfg) {
  PipelineOptions o;
  o.fidelity = cfg.fidelity_root ? FidelityConvention::Root : FidelityConvention::Squared;
  o.combiner = cfg.combiner == "mean" ? Combiner::Mean : Combiner::RandomDraw;
  return o;
}

MlConfig ml_config(const Config& cfg) {
  MlConfig ml;
  ml.seed = cfg.seed;
  return ml;
}

std::string cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return v.dump();
  if (v.is_number()) return format_sig6(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

/// One-row table from a JSON object; nested objects become prefix_key.
CsvTable flatten(const Json& j) {
  CsvTable t;
  t.rows.emplace_back();
  std::function<void(const Json&, const std::string&)> walk = [&](const Json& o, const std::string& prefix) {
    for (const auto& [k, v] : o.items()) {
      if (k == "meta") continue;
      if (v.is_object()) {
        walk(v, prefix + k + "_");
      } else {
        t.header.push_back(prefix + k);
        t.rows.back().push_back(cell(v));
      }
    }
  };
  walk(j, "");
  return t;
}

void emit_object(const Config& cfg, std::ostream& out, Json j, const RunMeta& m, const char* fallback_format) {
  if (resolve_format(cfg, fallback_format, true) == "csv") {
    emit(cfg, out, flatten(j).render(m));
  } else {
    j["meta"] = to_json(m);
    emit(cfg, out, dump(j));
  }
}

struct Input {
  std::optional<CountRecord> counts;
  std::optional<DensityMatrix> rho;
  std::optional<StateSpec> spec;
  std::string tag;
};

/// Records the N_T of the data actually analysed.
RunMeta meta(const Config& cfg, const Input& in, int n_mc) {
  return {cfg.seed, in.counts ? in.counts->n_total : cfg.n_total, n_mc};
}

CountRecord simulate_counts(const StateSpec& spec, const Config& cfg, bool time_mixing) {
  const std::uint64_t s = derive_seed(cfg.seed, streams::kBaseCounts, 0);
  if (cfg.exact) return exact_counts(born_probabilities(spec.state, standard_projector_set()), cfg.n_total);
  if (time_mixing) return sample_counts_time_mixed(spec.components, cfg.n_total, s);
  return sample_counts(born_probabilities(spec.state, standard_projector_set()), cfg.n_total, s);
}

/// A JSON file (count record or density matrix) or, failing that, a state
/// spec whose counts are simulated.
Input resolve_input(const std::string& arg, const Config& cfg) {
  Input in;
  if (fs::is_regular_file(arg)) {
    const Json j = read_json_file(arg);
    in.tag = fs::path(arg).stem().string();
    if (j.is_object() && j.contains("labels"))
      in.counts = counts_from_json(j);
    else if (j.is_object() && j.contains("dim"))
      in.rho = density_from_json(j);
    else
      bad_input("'" + arg + "': expected a count record (field 'labels') or a density matrix (field 'dim')");
    return in;
  }
  try {
    in.spec = parse_state_spec(arg);
  } catch (const Error& e) {
    throw Error(ErrorCode::BadSpec, "'" + arg + "' is neither a readable file nor a valid state spec; " + e.what());
  }
  in.tag = in.spec->text;
  in.counts = simulate_counts(*in.spec, cfg, false);
  return in;
}

const CountRecord& need_counts(const Input& in, const char* what) {
  if (!in.counts) bad_input(std::string(what) + " needs a count record, not a density matrix");
  return *in.counts;
}

DensityMatrix resolve_state(const std::string& arg) {
  if (fs::is_regular_file(arg)) return density_from_json(read_json_file(arg));
  return parse_state_spec(arg).state;
}

Family family_for(const Config& cfg, const Input& in) {
  if (cfg.family == "werner") return Family::Werner;
  if (cfg.family == "damped") return Family::Damped;
  if (in.spec && in.spec->reference) return in.spec->reference->family;
  return Family::Werner;
}

BellKind kind_for(const Config& cfg, const Input& in) {
  if (cfg.kind == "phi") return BellKind::PhiPlus;
  if (cfg.kind == "psi") return BellKind::PsiPlus;
  if (in.spec && in.spec->reference) return in.spec->reference->kind;
  return BellKind::PhiPlus;
}

std::uint64_t estimator_seed(const Config& cfg) { return derive_seed(cfg.seed, streams::kEstimator, 0); }

// ---------------------------------------------------------------- commands

void cmd_simulate(const Config& cfg, std::ostream& out, const std::string& spec_text, bool time_mixing) {
  resolve_format(cfg, "json", false);
  const StateSpec spec = parse_state_spec(spec_text);
  Json j = to_json(simulate_counts(spec, cfg, time_mixing));
  j["state"] = spec.text;
  j["meta"] = to_json(meta(cfg, 0));
  emit(cfg, out, dump(j));
}

void cmd_reconstruct(const Config& cfg, std::ostream& out, const std::string& input, const std::string& diag_path) {
  resolve_format(cfg, "json", false);
  const Input in = resolve_input(input, cfg);
  const ReconstructionResult r = ml_reconstruct(need_counts(in, "reconstruct"), ml_config(cfg));
  Json j = to_json(r.rho);
  if (diag_path.empty()) {
    j["diagnostics"] = diagnostics_json(r);
  } else {
    Json d = diagnostics_json(r);
    d["meta"] = to_json(meta(cfg, in, 0));
    write_text_file(diag_path, dump(d));
  }
  j["meta"] = to_json(meta(cfg, in, 0));
  emit(cfg, out, dump(j));
}

void cmd_discord(const Config& cfg, std::ostream& out, const std::string& input, const std::string& method,
                 const std::string& party) {
  const Input in = resolve_input(input, cfg);
  const Party measured = party == "b" ? Party::B : Party::A;
  DiscordEstimate est;
  std::optional<Quantity> quantity;
  if (method == "tt") {
    const DensityMatrix rho = in.rho ? *in.rho : ml_reconstruct(*in.counts, ml_config(cfg)).rho;
    est = discord_full(rho, measured);
    quantity = Quantity::discord_tt();
    if (measured == Party::B && cfg.mc > 0) bad_input("--mc with --party b is not supported");
  } else if (method == "pt") {
    if (measured == Party::B) bad_input("partial tomography measures party A");
    if (in.rho) {
      const MeasurementAxis z{0.0, 0.0};
      std::vector<Conditional> conds;
      for (int k = 0; k < 2; ++k) {
        try {
          conds.push_back(conditional_state(*in.rho, z, k, Party::A));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::ConditionalOnNullEvent) throw;
        }
      }
      est = discord_partial(*in.rho, z, conds);
    } else {
      const DensityMatrix rho = ml_reconstruct(*in.counts, ml_config(cfg)).rho;
      const PartialCounts pc = partial_counts_from_record(*in.counts);
      const auto conds = conditionals_from_partial(pc);
      est = discord_partial(rho, pc.axis, conds);
    }
    quantity = Quantity::discord_pt();
  } else {
    const Family f = family_for(cfg, in);
    const BellKind k = kind_for(cfg, in);
    est = discord_xmodel(need_counts(in, "the xmodel method"), f, k, estimator_seed(cfg),
                         pipeline_options(cfg).combiner);
    quantity = Quantity::discord_xmodel(f, k);
  }
  Json j = to_json(est);
  int n_mc = 0;
  if (cfg.mc > 0) {
    n_mc = cfg.mc;
    j["uncertainty"] = to_json(mc_uncertainty(need_counts(in, "--mc"), *quantity, n_mc, cfg.seed, pipeline_options(cfg)));
  }
  emit_object(cfg, out, std::move(j), meta(cfg, in, n_mc), "json");
}

void cmd_estimate_p(const Config& cfg, std::ostream& out, const std::string& input) {
  const Input in = resolve_input(input, cfg);
  const CountRecord& counts = need_counts(in, "estimate-p");
  const Family f = family_for(cfg, in);
  const BellKind k = kind_for(cfg, in);
  const PipelineOptions opts = pipeline_options(cfg);
  const MixingParam p = estimate_p(counts, f, k, estimator_seed(cfg), opts.combiner);
  Json j{{"family", to_string(f)}, {"kind", to_string(k)}, {"combiner", cfg.combiner},
         {"p", p.value()},         {"purity", p_to_purity(p, f)}};
  if (resolve_format(cfg, "json", true) == "json") {
    Json rel = Json::array();
    for (const auto& r : estimator_relations(f, k)) {
      const double n = static_cast<double>(counts.count_of(r.label).value_or(0));
      rel.push_back({{"label", r.label}, {"sign", r.sign}, {"estimate", r.sign * (4.0 * n / counts.n_total - 1.0)}});
    }
    j["relations"] = std::move(rel);
  }
  emit_object(cfg, out, std::move(j), meta(cfg, in, 0), "json");
}

Quantity parse_quantity(const std::string& name, const Config& cfg, const Input& in, const std::string& target) {
  if (name == "purity") return Quantity::purity();
  if (name == "discord-tt") return Quantity::discord_tt();
  if (name == "discord-pt") return Quantity::discord_pt();
  if (name == "optimal-angle") return Quantity::optimal_angle();
  if (name == "discord-xmodel") return Quantity::discord_xmodel(family_for(cfg, in), kind_for(cfg, in));
  if (name == "purity-xmodel") return Quantity::purity_xmodel(family_for(cfg, in), kind_for(cfg, in));
  if (name == "fidelity-to") {
    if (!target.empty()) return Quantity::fidelity_to(resolve_state(target));
    if (in.spec) return Quantity::fidelity_to(in.spec->state);
    bad_input("fidelity-to needs --target when the input is a count record");
  }
  bad_input("unknown quantity '" + name + "'");
}

void cmd_mc_uncertainty(const Config& cfg, std::ostream& out, const std::string& input,
                        const std::vector<std::string>& names, const std::string& target) {
  const Input in = resolve_input(input, cfg);
  std::vector<Quantity> qs;
  for (const auto& n : names) qs.push_back(parse_quantity(n, cfg, in, target));
  const int n_mc = mc_or(cfg, kDefaultMcSamples);
  const auto results = mc_uncertainty(need_counts(in, "mc-uncertainty"), qs, n_mc, cfg.seed, pipeline_options(cfg));
  const RunMeta m = meta(cfg, in, n_mc);
  if (resolve_format(cfg, "json", true) == "csv") {
    CsvTable t{{"quantity", "mean", "std", "n_samples"}, {}};
    for (const auto& r : results)
      t.rows.push_back({r.quantity, format_sig6(r.mean), format_sig6(r.std), std::to_string(r.n_samples)});
    emit(cfg, out, t.render(m));
    return;
  }
  Json arr = Json::array();
  for (const auto& r : results) arr.push_back(to_json(r));
  emit(cfg, out, dump(Json{{"results", std::move(arr)}, {"meta", to_json(m)}}));
}

CsvTable fd_table(const std::vector<FDPoint>& pts) {
  CsvTable t{{"fidelity", "discord", "reference_tag"}, {}};
  for (const auto& p : pts) t.rows.push_back({format_sig6(p.fidelity), format_sig6(p.discord), p.reference_tag});
  return t;
}

void cmd_fd_scatter(const Config& cfg, std::ostream& out, const std::string& reference, const std::string& counts_path) {
  const DensityMatrix ref = resolve_state(reference);
  const CountRecord base = counts_path.empty()
                               ? exact_counts(born_probabilities(ref, standard_projector_set()), cfg.n_total)
                               : counts_from_json(read_json_file(counts_path));
  const int n = mc_or(cfg, kDefaultScatterPoints);
  const auto pts = fd_scatter(ref, base, n, cfg.seed, reference, pipeline_options(cfg));
  const RunMeta m = meta(cfg, n);
  if (resolve_format(cfg, "csv", true) == "csv") {
    emit(cfg, out, fd_table(pts).render(m));
    return;
  }
  Json arr = Json::array();
  for (const auto& p : pts) arr.push_back({{"fidelity", p.fidelity}, {"discord", p.discord}, {"reference_tag", p.reference_tag}});
  emit(cfg, out, dump(Json{{"points", std::move(arr)}, {"meta", to_json(m)}}));
}

void cmd_optimal_angle(const Config& cfg, std::ostream& out, const std::string& input) {
  const Input in = resolve_input(input, cfg);
  const int n = mc_or(cfg, kDefaultAngleSamples);
  const auto samples = optimal_angle_distribution(need_counts(in, "optimal-angle"), n, cfg.seed, ml_config(cfg));
  const RunMeta m = meta(cfg, in, n);
  if (resolve_format(cfg, "csv", true) == "csv") {
    CsvTable t{{"theta", "phi", "degenerate"}, {}};
    for (const auto& s : samples)
      t.rows.push_back({format_sig6(s.axis.theta), format_sig6(s.axis.phi), s.degenerate ? "true" : "false"});
    emit(cfg, out, t.render(m));
    return;
  }
  Json arr = Json::array();
  std::vector<double> thetas;
  for (const auto& s : samples) {
    arr.push_back({{"theta", s.axis.theta}, {"phi", s.axis.phi}, {"degenerate", s.degenerate}});
    thetas.push_back(s.axis.theta);
  }
  Json j{{"samples", std::move(arr)}};
  if (thetas.size() >= 2) j["theta"] = to_json(summarize(thetas, "optimal-angle"));
  j["meta"] = to_json(m);
  emit(cfg, out, dump(j));
}

// --------------------------------------------------------------- reproduce

std::string mu_cell(double mu) { return format_sig6(mu); }

std::vector<MethodComparison> comparison_rows(const Config& cfg, int n_mc, std::ostream& err) {
  std::vector<MethodComparison> rows;
  const auto refs = reference_states();
  for (std::size_t i = 0; i < refs.size(); ++i) {
    err << "  " << refs[i].tag() << "\n";
    rows.push_back(compare_methods(refs[i], cfg.n_total, n_mc, derive_seed(cfg.seed, streams::kReference, i),
                                   cfg.exact, pipeline_options(cfg)));
  }
  return rows;
}

std::vector<std::string> key_cells(const MethodComparison& r) {
  return {to_string(r.family), to_string(r.kind), mu_cell(r.mu_th)};
}

void add(std::vector<std::string>& row, const UncertainValue& u) {
  row.push_back(format_sig6(u.mean));
  row.push_back(format_sig6(u.std));
}

const char* kFig3Script =
    "set datafile separator ','\n"
    "set xlabel 'theta (rad)'\nset ylabel 'samples'\n"
    "binwidth = 0.01\nbin(x) = binwidth * floor(x / binwidth)\n"
    "plot for [tag in 'damped:psi:2/3 bell:phi'] 'fig3.csv' using (strcol(4) eq tag ? bin($1) : 1/0):(1.0) "
    "smooth freq with boxes title tag\n";

const char* kFig4Script =
    "set datafile separator ','\n"
    "set xlabel 'purity'\nset ylabel 'discord (bits)'\nset key left top\n"
    "plot 'fig4_theory.csv' using 2:(strcol(1) eq 'werner' ? $3 : 1/0) with lines title 'Werner theory', \\\n"
    "     'fig4_theory.csv' using 2:(strcol(1) eq 'damped' ? $3 : 1/0) with lines title 'damped theory', \\\n"
    "     'fig4.csv' using 3:5:6 with yerrorbars title 'TT', \\\n"
    "     'fig4.csv' using 3:7:8 with yerrorbars title 'PT', \\\n"
    "     'fig4.csv' using 3:9:10 with yerrorbars title 'X model'\n";

const char* kFig5Script =
    "set datafile separator ','\n"
    "set xlabel 'fidelity'\nset ylabel 'discord (bits)'\n"
    "plot for [tag in 'bell:psi bell:phi werner:psi:2/3 werner:phi:2/3'] 'fd_scatter.csv' "
    "using 1:(strcol(3) eq tag ? $2 : 1/0) with points title tag\n";

void cmd_reproduce(const Config& cfg, std::ostream& out, std::ostream& err, int table, int figure, bool gnuplot) {
  if ((table == 0) == (figure == 0)) bad_input("reproduce needs exactly one of --table or --figure");
  if (cfg.format == "json") bad_input("reproduce writes CSV only");
  const fs::path dir = cfg.out.empty() ? fs::path(".") : fs::path(cfg.out);
  std::vector<fs::path> written;
  auto write = [&](const std::string& name, const std::string& text) {
    write_text_file(dir / name, text);
    written.push_back(dir / name);
  };

  if (table != 0 || figure == 4) {
    if (table < 0 || table > 3) bad_input("--table must be 1, 2 or 3");
    const int n_mc = mc_or(cfg, kDefaultMcSamples);
    const auto rows = comparison_rows(cfg, n_mc, err);
    const RunMeta m = meta(cfg, n_mc);
    CsvTable t;
    if (table == 1) {
      t.header = {"family", "kind", "mu_th", "fidelity_mean", "fidelity_std"};
      for (const auto& r : rows) {
        auto row = key_cells(r);
        add(row, r.fidelity);
        t.rows.push_back(row);
      }
      write("table1.csv", t.render(m));
    } else if (table == 2) {
      t.header = {"family", "kind", "mu_th", "mu_tt_mean", "mu_tt_std", "mu_x_mean", "mu_x_std"};
      for (const auto& r : rows) {
        auto row = key_cells(r);
        add(row, r.purity);
        add(row, r.purity_x);
        t.rows.push_back(row);
      }
      write("table2.csv", t.render(m));
    } else {
      t.header = {"family", "kind", "mu_th", "tt_mean", "tt_std", "pt_mean", "pt_std", "x_mean", "x_std"};
      if (figure == 4) t.header.insert(t.header.begin() + 3, "discord_th");
      for (const auto& r : rows) {
        auto row = key_cells(r);
        if (figure == 4) row.push_back(format_sig6(r.discord_th));
        add(row, r.tt);
        add(row, r.pt);
        add(row, r.x);
        t.rows.push_back(row);
      }
      if (figure == 4) {
        write("fig4.csv", t.render(m));
        CsvTable th{{"family", "mu", "discord"}, {}};
        for (const Family f : {Family::Werner, Family::Damped}) {
          const double lo = f == Family::Werner ? 0.25 : 0.5;
          for (int i = 0; i <= 75; ++i) {
            const double mu = lo + (1.0 - lo) * i / 75.0;
            th.rows.push_back({to_string(f), format_sig6(mu), format_sig6(discord_analytic(f, purity_to_p(mu, f)))});
          }
        }
        write("fig4_theory.csv", th.render(m));
        if (gnuplot) write("fig4.gp", kFig4Script);
      } else {
        write("table3.csv", t.render(m));
      }
    }
  } else if (figure == 3) {
    const int n = mc_or(cfg, kDefaultAngleSamples);
    CsvTable t{{"theta", "phi", "degenerate", "reference_tag"}, {}};
    const char* tags[] = {"damped:psi:2/3", "bell:phi"};
    for (std::size_t i = 0; i < 2; ++i) {
      err << "  " << tags[i] << "\n";
      const StateSpec spec = parse_state_spec(tags[i]);
      Config c = cfg;
      c.seed = derive_seed(cfg.seed, streams::kReference, i);
      const CountRecord base = simulate_counts(spec, c, false);
      MlConfig ml = ml_config(c);
      for (const auto& s : optimal_angle_distribution(base, n, c.seed, ml))
        t.rows.push_back({format_sig6(s.axis.theta), format_sig6(s.axis.phi), s.degenerate ? "true" : "false", tags[i]});
    }
    write("fig3.csv", t.render(meta(cfg, n)));
    if (gnuplot) write("fig3.gp", kFig3Script);
  } else if (figure == 5) {
    const int n = mc_or(cfg, kDefaultScatterPoints);
    std::vector<FDPoint> all;
    const char* tags[] = {"bell:psi", "bell:phi", "werner:psi:2/3", "werner:phi:2/3"};
    for (std::size_t i = 0; i < 4; ++i) {
      err << "  " << tags[i] << "\n";
      const DensityMatrix ref = parse_state_spec(tags[i]).state;
      const CountRecord base = exact_counts(born_probabilities(ref, standard_projector_set()), cfg.n_total);
      const auto pts = fd_scatter(ref, base, n, derive_seed(cfg.seed, streams::kReference, i), tags[i],
                                  pipeline_options(cfg));
      all.insert(all.end(), pts.begin(), pts.end());
    }
    write("fd_scatter.csv", fd_table(all).render(meta(cfg, n)));
    if (gnuplot) write("fig5.gp", kFig5Script);
  } else {
    bad_input("--figure must be 3, 4 or 5");
  }
  for (const auto& p : written) out << p.string() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum discord estimation from simulated or recorded two-qubit coincidence counts", "discordlab"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);
  app.fallthrough();

  Config cfg;
  app.add_option("--seed", cfg.seed, "Base RNG seed (falls back to $DISCORDLAB_SEED)")
      ->envname("DISCORDLAB_SEED")
      ->capture_default_str();
  app.add_option("--n-total", cfg.n_total, "Coincidence total N_T for simulated counts")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--mc", cfg.mc,
                 "Monte Carlo samples (defaults: 100 for uncertainties, 900 for optimal-angle, 500 for fd-scatter; "
                 "discord reports an uncertainty only when given)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--out", cfg.out, "Output file (directory for reproduce); stdout when omitted");
  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"auto", "json", "csv"}))
      ->capture_default_str();
  app.add_flag("--exact", cfg.exact, "Simulate rounded expected counts instead of Poisson samples");
  app.add_flag("--fidelity-root", cfg.fidelity_root, "Report sqrt fidelity Tr|sqrt(rho) sqrt(sigma)| instead of its square");
  app.add_option("--combiner", cfg.combiner, "Mixing-parameter estimator: one random relation or their mean")
      ->check(CLI::IsMember({"draw", "mean"}))
      ->capture_default_str();
  app.add_option("--family", cfg.family, "Single-parameter model family (default: from the state spec, else werner)")
      ->check(CLI::IsMember({"werner", "damped"}));
  app.add_option("--kind", cfg.kind, "Bell kind of the model (default: from the state spec, else phi)")
      ->check(CLI::IsMember({"phi", "psi"}));

  std::string spec_text, input, method = "tt", party = "a", diag_path, target, counts_path;
  std::vector<std::string> quantities{"discord-tt"};
  bool time_mixing = false, gnuplot = false;
  int table = 0, figure = 0;

  auto* sim = app.add_subcommand("simulate", "Simulate a count record for a state spec");
  sim->add_option("state", spec_text, "werner|damped:phi|psi:<purity>, bell:phi|psi, x:c1,c2,c3, source:theta,phi")
      ->required();
  sim->add_flag("--time-mixing", time_mixing, "Accumulate counts from time-shared pure-state runs");

  auto* rec = app.add_subcommand("reconstruct", "Maximum-likelihood density matrix from a count record");
  rec->add_option("counts", input, "Count record JSON (or a state spec to simulate)")->required();
  rec->add_option("--diagnostics", diag_path, "Write optimizer diagnostics to this file instead of embedding them");

  auto* dis = app.add_subcommand("discord", "Discord from a density matrix or count record");
  dis->add_option("input", input, "Density-matrix JSON, count record JSON, or a state spec")->required();
  dis->add_option("--method", method, "Estimator")->check(CLI::IsMember({"tt", "pt", "xmodel"}))->capture_default_str();
  dis->add_option("--party", party, "Measured party (tt)")->check(CLI::IsMember({"a", "b"}))->capture_default_str();

  auto* est = app.add_subcommand("estimate-p", "Mixing parameter of the single-parameter model");
  est->add_option("counts", input, "Count record JSON (or a state spec to simulate)")->required();

  auto* mcu = app.add_subcommand("mc-uncertainty", "Monte Carlo mean and standard deviation of pipeline quantities");
  mcu->add_option("counts", input, "Count record JSON (or a state spec to simulate)")->required();
  mcu->add_option("--quantity", quantities, "Quantities to propagate")
      ->check(CLI::IsMember({"fidelity-to", "purity", "discord-tt", "discord-pt", "discord-xmodel", "purity-xmodel",
                             "optimal-angle"}))
      ->capture_default_str();
  mcu->add_option("--target", target, "Reference state for fidelity-to (spec or density-matrix JSON)");

  auto* fds = app.add_subcommand("fd-scatter", "Fidelity and discord of Monte Carlo neighbour states");
  fds->add_option("reference", input, "Reference state (spec or density-matrix JSON)")->required();
  fds->add_option("--counts", counts_path, "Base count record (default: expected counts of the reference)");

  auto* ang = app.add_subcommand("optimal-angle", "Distribution of the optimal measurement axis");
  ang->add_option("counts", input, "Count record JSON (or a state spec to simulate)")->required();

  auto* rep = app.add_subcommand("reproduce", "Regenerate a table or figure data set as CSV");
  rep->add_option("--table", table, "Table 1 (fidelity), 2 (purity) or 3 (discord)");
  rep->add_option("--figure", figure, "Figure 3 (optimal angles), 4 (discord vs purity) or 5 (F-D scatter)");
  rep->add_flag("--gnuplot", gnuplot, "Also write a gnuplot script for figures");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: cli.BadInput: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (sim->parsed()) cmd_simulate(cfg, out, spec_text, time_mixing);
    else if (rec->parsed()) cmd_reconstruct(cfg, out, input, diag_path);
    else if (dis->parsed()) cmd_discord(cfg, out, input, method, party);
    else if (est->parsed()) cmd_estimate_p(cfg, out, input);
    else if (mcu->parsed()) cmd_mc_uncertainty(cfg, out, input, quantities, target);
    else if (fds->parsed()) cmd_fd_scatter(cfg, out, input, counts_path);
    else if (ang->parsed()) cmd_optimal_angle(cfg, out, input);
    else if (rep->parsed()) cmd_reproduce(cfg, out, err, table, figure, gnuplot);
  } catch (const Error& e) {
    err << "error: " << e.qualified_name() << ": " << e.what() << "\n";
    return is_input_error(e.code()) ? kExitInput : kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace discordlab::cli

#include "causalbounds/cli/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <ostream>

#include "causalbounds/cli/config.hpp"
#include "causalbounds/cli/report.hpp"
#include "causalbounds/cli/svg.hpp"
#include "causalbounds/csv.hpp"
#include "causalbounds/error.hpp"
#include "causalbounds/ingest.hpp"
#include "causalbounds/logistic.hpp"
#include "causalbounds/mech_bounds.hpp"
#include "causalbounds/model_dsl.hpp"
#include "causalbounds/pkpd.hpp"
#include "causalbounds/stat_identify.hpp"

namespace causalbounds::cli {

namespace {

struct OutputOpts {
  std::string json;
  std::string svg;
  int precision = 2;
  bool timing = false;
};

struct SearchOpts {
  std::size_t grid = 21;
  std::size_t multistart = 16;
  bool no_refine = false;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  CLI::Option* grid_opt = nullptr;
  CLI::Option* multistart_opt = nullptr;
  CLI::Option* tol_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* no_refine_opt = nullptr;

  /// Overrides `cfg` only with flags given on the command line.
  void apply(SearchConfig& cfg) const {
    if (grid_opt->count()) cfg.grid_points_per_dim = grid;
    if (multistart_opt->count()) cfg.multistart_count = multistart;
    if (tol_opt->count()) cfg.refine_tolerance = tol;
    if (seed_opt->count()) cfg.seed = seed;
    if (no_refine_opt->count()) cfg.local_refine = false;
    cfg.validate();
  }
};

struct TableInput {
  std::string table;
  std::string counts;
  std::string data;
  std::string y = "y";
  std::string a = "a";
  std::string delimiter = ",";
};

void add_output_opts(CLI::App* app, OutputOpts& o) {
  app->add_option("--json", o.json, "Write the run report as JSON to this path");
  app->add_option("--svg", o.svg, "Write an interval diagram to this path");
  app->add_option("--precision", o.precision, "Decimal places in printed output")
      ->check(CLI::Range(0, 17));
  app->add_flag("--timing", o.timing, "Include wall-clock duration in the JSON report");
}

void add_search_opts(CLI::App* app, SearchOpts& s, std::size_t default_grid) {
  s.grid = default_grid;
  s.grid_opt = app->add_option("--grid", s.grid, "Grid points per dimension")->capture_default_str();
  s.multistart_opt =
      app->add_option("--multistart", s.multistart, "Random multistart points")->capture_default_str();
  s.tol_opt = app->add_option("--tol", s.tol, "Nelder-Mead tolerance")->capture_default_str();
  s.seed_opt = app->add_option("--seed", s.seed, "Seed for multistart points")->capture_default_str();
  s.no_refine_opt = app->add_flag("--no-refine", s.no_refine, "Skip local refinement");
}

void add_table_opts(CLI::App* app, TableInput& t) {
  auto* table = app->add_option("--table", t.table, "Joint probabilities p11,p01,p10,p00 (p<y><a>)");
  auto* counts = app->add_option("--counts", t.counts, "Joint counts n11,n01,n10,n00 (n<y><a>)");
  auto* data = app->add_option("--data", t.data, "CSV of unit records with binary y and a columns");
  table->excludes(counts)->excludes(data);
  counts->excludes(data);
  app->add_option("--y", t.y, "Outcome column")->capture_default_str();
  app->add_option("--a", t.a, "Treatment column")->capture_default_str();
  app->add_option("--delimiter", t.delimiter, "Field delimiter")->capture_default_str();
}

char delimiter_from(const std::string& s) {
  if (s == "\\t" || s == "tab") return '\t';
  if (s.size() != 1) throw DomainError("delimiter must be a single character");
  return s.front();
}

std::vector<double> number_list(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto v = parse_number(piece);
    if (!v) throw DomainError(std::string(what) + ": cannot parse '" + piece + "' as a number");
    out.push_back(*v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.size() != expected) {
    throw DomainError(std::string(what) + " needs " + std::to_string(expected) + " comma-separated values, got " +
                      std::to_string(out.size()));
  }
  return out;
}

std::string fixed(double x, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, x);
  return buf;
}

std::string describe(const LabeledResult& lr, int precision) {
  const auto& r = lr.result;
  std::string s = lr.label + ": ";
  if (r.kind == IdentificationKind::point) {
    s += fixed(r.interval.lo(), precision) + " (point)";
  } else {
    s += "[" + fixed(r.interval.lo(), precision) + ", " + fixed(r.interval.hi(), precision) + "] (" +
         to_string(r.kind) + ")";
  }
  return s;
}

class Runner {
 public:
  Runner(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
      : out_(out), err_(err), started_(std::chrono::steady_clock::now()) {
    report_.command = args;
  }

  void digest_file(const std::string& name, const std::string& path) {
    report_.inputs.push_back({name, content_digest(read_file(path))});
  }
  void digest_text(const std::string& name, const std::string& text) {
    report_.inputs.push_back({name, content_digest(text)});
  }
  void add(std::string label, BoundsResult r) { report_.results.push_back({std::move(label), std::move(r)}); }
  void warn(std::string w) { report_.warnings.push_back(std::move(w)); }
  RunReport& report() { return report_; }

  int finish(const OutputOpts& o, Interval axis) {
    for (const auto& lr : report_.results) out_ << describe(lr, o.precision) << "\n";
    for (const auto& w : report_.warnings) err_ << "warning: " << w << "\n";
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started_).count();
    if (o.timing) {
      report_.duration_ms = ms;
      err_ << "elapsed: " << fixed(ms, 1) << " ms\n";
    }
    if (!o.json.empty()) emit_json(report_, o.json);
    if (!o.svg.empty()) emit_svg_bounds(report_.results, axis, o.svg);
    return kExitOk;
  }

 private:
  std::ostream& out_;
  std::ostream& err_;
  std::chrono::steady_clock::time_point started_;
  RunReport report_;
};

BinaryJointTable load_table(const TableInput& t, Runner& run) {
  if (!t.table.empty()) {
    const auto v = number_list(t.table, 4, "--table");
    run.digest_text("table", t.table);
    return BinaryJointTable(JointEntries{v[0], v[1], v[2], v[3]}, "table");
  }
  if (!t.counts.empty()) {
    const auto v = number_list(t.counts, 4, "--counts");
    JointCounts c;
    std::uint64_t* slots[] = {&c.n11, &c.n01, &c.n10, &c.n00};
    for (std::size_t k = 0; k < 4; ++k) {
      if (v[k] < 0 || v[k] != static_cast<double>(static_cast<std::uint64_t>(v[k]))) {
        throw DomainError("--counts entries must be nonnegative integers");
      }
      *slots[k] = static_cast<std::uint64_t>(v[k]);
    }
    run.digest_text("counts", t.counts);
    return table_from_counts(c, "counts");
  }
  if (!t.data.empty()) {
    run.digest_file("data", t.data);
    BinaryColumns cols{t.y, t.a, std::nullopt, delimiter_from(t.delimiter)};
    return read_binary_records_csv(t.data, cols).joint;
  }
  throw DomainError("one of --table, --counts or --data is required");
}

StratifiedTable load_strata(const std::string& path, char delim) {
  const CsvTable t = read_csv(path, delim);
  const auto c_label = t.column("stratum");
  const auto c_mass = t.column("mass");
  const auto c_p1 = t.column("p_y1_a1");
  const auto c_p0 = t.column("p_y1_a0");
  std::vector<Stratum> strata;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const auto rec = CsvTable::record_number(r);
    auto num = [&](std::size_t col, const char* name) -> std::optional<double> {
      if (row[col].empty()) return std::nullopt;
      if (auto v = parse_number(row[col])) return v;
      throw DataFormatError("row " + std::to_string(rec) + ", column '" + name + "': not a number", rec);
    };
    Stratum s;
    s.label = row[c_label];
    const auto mass = num(c_mass, "mass");
    if (!mass) throw DataFormatError("row " + std::to_string(rec) + ": mass is required", rec);
    s.mass = *mass;
    s.p_y1_given_a1 = num(c_p1, "p_y1_a1");
    s.p_y1_given_a0 = num(c_p0, "p_y1_a0");
    strata.push_back(std::move(s));
  }
  return StratifiedTable(std::move(strata));
}

dsl::ModelSpec load_model(const std::string& path, Runner& run) {
  const std::string text = read_file(path);
  run.digest_text("model", text);
  auto spec = dsl::parse_model(text);
  for (const auto& w : spec.warnings()) run.warn("model: " + w);
  return spec;
}

void note_violations(const BoundsResult& r, Runner& run) {
  if (r.diagnostics.constraint_violations > 0) {
    run.warn(std::to_string(r.diagnostics.constraint_violations) +
             " parameter combinations violated probability constraints and were skipped");
  }
}

std::string stem_of(const std::string& path) { return std::filesystem::path(path).stem().string(); }

const CLI::App* deepest(const CLI::App* app) {
  for (const auto* sub : app->get_subcommands()) {
    if (sub->parsed()) return deepest(sub);
  }
  return app;
}

}  // namespace

int exit_code_for(const std::exception& e) noexcept {
  if (const auto* ce = dynamic_cast<const Error*>(&e)) {
    return ce->error_class() == ErrorClass::input ? kExitInput : kExitComputation;
  }
  if (dynamic_cast<const CLI::ParseError*>(&e)) return kExitInput;
  return kExitComputation;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounds and point estimates for binary average causal effects", "causalbounds"};
  app.require_subcommand(1);

  // manski / randomized
  TableInput manski_in;
  OutputOpts manski_out;
  auto* manski = app.add_subcommand("manski", "Nonparametric ACE bounds from an (A, Y) table");
  add_table_opts(manski, manski_in);
  add_output_opts(manski, manski_out);

  TableInput rand_in;
  OutputOpts rand_out;
  auto* randomized = app.add_subcommand("randomized", "Point estimate assuming marginal exchangeability");
  add_table_opts(randomized, rand_in);
  add_output_opts(randomized, rand_out);

  // gformula
  std::string gf_data, gf_strata, gf_y = "y", gf_a = "a", gf_w = "w", gf_design = "nonparametric";
  std::string gf_delim = ",";
  OutputOpts gf_out;
  auto* gformula = app.add_subcommand("gformula", "Standardization over a discrete covariate W");
  auto* gf_data_opt = gformula->add_option("--data", gf_data, "CSV of unit records with y, a and w columns");
  auto* gf_strata_opt =
      gformula->add_option("--strata", gf_strata, "CSV with stratum,mass,p_y1_a1,p_y1_a0 columns");
  gf_data_opt->excludes(gf_strata_opt);
  gformula->add_option("--y", gf_y, "Outcome column")->capture_default_str();
  gformula->add_option("--a", gf_a, "Treatment column")->capture_default_str();
  gformula->add_option("--w", gf_w, "Stratum column")->capture_default_str();
  gformula->add_option("--design", gf_design, "nonparametric, saturated or main-effects")
      ->check(CLI::IsMember({"nonparametric", "saturated", "main-effects"}))
      ->capture_default_str();
  gformula->add_option("--delimiter", gf_delim, "Field delimiter")->capture_default_str();
  add_output_opts(gformula, gf_out);

  // mech bounds / check-vacuous
  auto* mech = app.add_subcommand("mech", "Mechanistic model bounds");
  mech->require_subcommand(1);
  std::string mb_model, mb_g = "g", mb_h = "h";
  SearchOpts mb_search;
  OutputOpts mb_out;
  auto* mbounds = mech->add_subcommand("bounds", "Bounds on psi-bar over the declared parameter box");
  mbounds->add_option("model", mb_model, "Model file")->required();
  mbounds->add_option("--g-fun", mb_g, "Mediator function g(a)")->capture_default_str();
  mbounds->add_option("--h-fun", mb_h, "Outcome function h(a, m)")->capture_default_str();
  add_search_opts(mbounds, mb_search, 21);
  add_output_opts(mbounds, mb_out);

  std::string mv_model, mv_g = "g", mv_h = "h";
  double mv_cap = 20.0;
  SearchOpts mv_search;
  OutputOpts mv_out;
  auto* mvac = mech->add_subcommand("check-vacuous", "Whether psi-bar spans [-1, 1] once ranges are widened");
  mvac->add_option("model", mv_model, "Model file")->required();
  mvac->add_option("--g-fun", mv_g, "Mediator function g(a)")->capture_default_str();
  mvac->add_option("--h-fun", mv_h, "Outcome function h(a, m)")->capture_default_str();
  mvac->add_option("--cap", mv_cap, "Magnitude cap for widened ranges")->capture_default_str();
  add_search_opts(mvac, mv_search, 5);
  add_output_opts(mvac, mv_out);

  // pkpd run
  auto* pk = app.add_subcommand("pkpd", "Amlodipine case study");
  pk->require_subcommand(1);
  std::string pk_data, pk_config, pk_columns;
  bool pk_unweighted = false;
  SearchOpts pk_search;
  OutputOpts pk_out;
  auto* pkrun = pk->add_subcommand("run", "Bounds on the resolution contrast over the configured box");
  pkrun->add_option("--data", pk_data, "Baseline SBP file")->required();
  pkrun->add_option("--config", pk_config, "Case-study config file")->required();
  pkrun->add_option("--columns", pk_columns, "File with a [data] section overriding the config's");
  pkrun->add_flag("--unweighted", pk_unweighted, "Ignore the weight column (unit weights)");
  add_search_opts(pkrun, pk_search, 21);
  add_output_opts(pkrun, pk_out);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << deepest(&app)->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << deepest(&app)->help();
    return kExitInput;
  }

  Runner run(args, out, err);
  const Interval signed_axis(-1.0, 1.0);
  try {
    if (manski->parsed()) {
      const auto t = load_table(manski_in, run);
      run.add("ACE (nonparametric bounds)", manski_ace_bounds(t));
      return run.finish(manski_out, signed_axis);
    }
    if (randomized->parsed()) {
      const auto t = load_table(rand_in, run);
      run.add("ACE (randomized)", randomized_point_estimate(t));
      return run.finish(rand_out, signed_axis);
    }
    if (gformula->parsed()) {
      const char delim = delimiter_from(gf_delim);
      if (!gf_strata.empty()) {
        if (gf_design != "nonparametric") throw DomainError("--design " + gf_design + " needs unit records (--data)");
        run.digest_file("strata", gf_strata);
        const auto r = gformula_nonparametric(load_strata(gf_strata, delim));
        for (const auto& n : r.diagnostics.notes) run.warn(n);
        run.add("ACE (g-formula, nonparametric)", r);
        return run.finish(gf_out, signed_axis);
      }
      if (gf_data.empty()) throw DomainError("one of --data or --strata is required");
      run.digest_file("data", gf_data);
      const auto data = read_binary_records_csv(gf_data, BinaryColumns{gf_y, gf_a, gf_w, delim});
      if (gf_design == "nonparametric") {
        const auto r = gformula_nonparametric(*data.stratified);
        for (const auto& n : r.diagnostics.notes) run.warn(n);
        run.add("ACE (g-formula, nonparametric)", r);
      } else {
        const auto design = logistic_design_from_string(gf_design);
        const auto fit = fit_logistic(data.records, design);
        run.add("ACE (g-formula, " + gf_design + " logistic)", gformula_parametric(data.records, fit));
      }
      return run.finish(gf_out, signed_axis);
    }
    if (mbounds->parsed()) {
      SearchConfig cfg;
      mb_search.apply(cfg);
      const MediatorMechanism mechm(load_model(mb_model, run), mb_g, mb_h);
      const auto r = bound_psi(mechm, cfg);
      note_violations(r, run);
      run.add("psi-bar (" + stem_of(mb_model) + ")", r);
      return run.finish(mb_out, signed_axis);
    }
    if (mvac->parsed()) {
      SearchConfig cfg;
      cfg.grid_points_per_dim = 5;
      mv_search.apply(cfg);
      const MediatorMechanism mechm(load_model(mv_model, run), mv_g, mv_h);
      const auto rep = check_vacuous(mechm, mv_cap, cfg);
      note_violations(rep.search, run);
      char eps[32];
      std::snprintf(eps, sizeof eps, "%g", rep.epsilon);
      out << (rep.vacuous ? "vacuous" : "non-vacuous") << " (\xCE\xB5=" << eps << ")\n";
      out << "  sup psi-bar = " << fixed(rep.sup, 6) << ", inf psi-bar = " << fixed(rep.inf, 6)
          << ", cap = " << mv_cap << "\n";
      out << "  " << rep.statement << "\n";
      run.add("psi-bar widened (" + stem_of(mv_model) + ")", rep.search);
      return run.finish(mv_out, signed_axis);
    }
    if (pkrun->parsed()) {
      const std::string cfg_text = read_file(pk_config);
      run.digest_text("config", cfg_text);
      const Config cfg = parse_config(cfg_text);
      const auto pcfg = pkpd_config_from(cfg);
      SearchConfig scfg;
      apply_search_section(cfg, scfg);
      pk_search.apply(scfg);
      ColumnMap cmap;
      if (!pk_columns.empty()) {
        const std::string col_text = read_file(pk_columns);
        run.digest_text("columns", col_text);
        cmap = column_map_from(parse_config(col_text));
      } else {
        cmap = column_map_from(cfg);
      }
      if (pk_unweighted) cmap.weight_column.reset();
      run.digest_file("data", pk_data);
      const auto ingest = read_weighted_csv(pk_data, cmap);
      if (ingest.stats.dropped() > 0) {
        run.warn(std::to_string(ingest.stats.dropped()) + " of " + std::to_string(ingest.stats.rows) +
                 " rows dropped (" + std::to_string(ingest.stats.dropped_missing) + " missing, " +
                 std::to_string(ingest.stats.dropped_nonpositive_weight) + " non-positive weight)");
      }
      const auto dist = pkpd::truncate_renormalize(ingest.dist, pcfg.threshold);
      const auto r = pkpd::case_bounds(dist, pcfg, scfg);
      for (const auto& [k, v] : r.components) {
        if (k == "negative_sbp_count" && v > 0) {
          run.warn(std::to_string(static_cast<std::uint64_t>(v)) + " negative predicted SBP values");
        }
      }
      run.add("hypertension resolution contrast", r);
      const Interval axis = r.interval.lo() >= 0.0 ? Interval(0.0, 1.0) : signed_axis;
      return run.finish(pk_out, axis);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  err << app.help();
  return kExitInput;
}

}  // namespace causalbounds::cli

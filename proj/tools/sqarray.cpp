// sqarray: command-line front end for augmented square array designs.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 validation failure,
// 3 catalog mismatch, 4 refused computation.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sqarray/sqarray.hpp"

using namespace sqarray;

namespace {

constexpr int kExitError = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitMismatch = 3;
constexpr int kExitRefused = 4;

std::string fixed(double x, int digits = 6) {
  if (!std::isfinite(x)) return "NA";
  std::ostringstream out;
  out << std::fixed << std::setprecision(digits) << x;
  return out.str();
}

std::string join(const std::vector<int>& v, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + std::to_string(v[i]);
  return out;
}

SquareArrayDesign as_square(const Design& d) {
  if (const auto* aux = std::get_if<AuxiliaryBlockDesign>(&d)) return to_square_array(*aux);
  const auto& sq = std::get<SquareArrayDesign>(d);
  require_valid(sq);
  return sq;
}

ValidationReport validate_design(const Design& d) {
  return std::visit(
      [](const auto& x) {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, AuxiliaryBlockDesign>)
          return validate_auxiliary(x);
        else
          return validate_square(x);
      },
      d);
}

void print_report(const ValidationReport& report) {
  for (const auto& v : report.violations) {
    std::cerr << "invalid: ";
    if (v.row && v.column) std::cerr << "row " << *v.row << ", column " << *v.column << ": ";
    std::cerr << v.message << '\n';
  }
}

PermutationGroup load_group(const std::string& spec, int t) {
  if (spec == "affine") return standard_group(t);
  if (spec.rfind("file:", 0) == 0) return closure_from_generators(t, load_generators(spec.substr(5)));
  throw StructuralError("unknown group \"" + spec + "\" (expected affine or file:<path>)");
}

PermutationGroup checked_group(const std::string& spec, int t) {
  PermutationGroup g = load_group(spec, t);
  if (!is_doubly_transitive(g))
    std::cerr << "warning: group of order " << g.order()
              << " is not doubly transitive; randomization will not be valid\n";
  return g;
}

MetricsReport closed_or_disconnected(const AuxiliaryBlockDesign& aux) {
  try {
    return closed_form_metrics(aux);
  } catch (const DisconnectedError&) {
    MetricsReport r;
    r.method = Method::ClosedForm;
    r.error_df = error_df(aux.t(), aux.k());
    return r;
  }
}

void metrics_csv(std::ostream& out, const std::vector<MetricsReport>& reports) {
  out << "method,a_abd,a_cc,a_ct,a_tt,error_df,connected\n";
  for (const auto& m : reports)
    out << to_string(m.method) << ',' << fixed(m.a_abd, 10) << ',' << fixed(m.a_cc, 10) << ','
        << fixed(m.a_ct, 10) << ',' << fixed(m.a_tt, 10) << ',' << m.error_df << ','
        << (m.connected ? "true" : "false") << '\n';
}

void print_class(const EquivalenceClass& c) {
  std::cout << c.representative().to_string() << "  members:";
  for (const auto& m : c.members) std::cout << ' ' << m.to_string();
  std::cout << '\n';
  if (!c.connected) {
    std::cout << "  disconnected\n";
    return;
  }
  std::cout << "  A_c " << fixed(c.metrics.a_abd, 4) << "  A_cc " << fixed(c.metrics.a_cc, 4)
            << "  A_ct " << fixed(c.metrics.a_ct, 4) << "  A_tt " << fixed(c.metrics.a_tt, 4)
            << (c.possibly_isomorphic ? "  (same A_c as another class)" : "") << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Augmented square array designs: construction, metrics, randomization"};
  app.require_subcommand(1);
  int exit_code = 0;

  // validate
  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check a design file against the structural rules");
  validate->add_option("design", validate_path, "Design JSON")->required();
  validate->callback([&] {
    const Design d = load_design(validate_path);
    const auto report = validate_design(d);
    if (!report.ok()) {
      print_report(report);
      exit_code = kExitInvalid;
      return;
    }
    std::visit([](const auto& x) { std::cout << "valid: t=" << x.t() << " k=" << x.k() << '\n'; }, d);
  });

  // construct
  std::string construct_path, construct_out;
  int cyclic_t = 0;
  std::vector<int> cyclic_block;
  bool construct_json = false, show_tests = false;
  auto* construct = app.add_subcommand("construct", "Build the square array from an auxiliary design");
  construct->add_option("design", construct_path, "Auxiliary, blocks or cyclic design JSON");
  auto* opt_cyclic = construct->add_option("--cyclic", cyclic_t, "Number of rows t of a cyclic design");
  construct->add_option("--block", cyclic_block, "Initial block, residues mod t")
      ->delimiter(',')
      ->needs(opt_cyclic);
  construct->add_option("-o,--output", construct_out, "Write the square array JSON here");
  construct->add_flag("--json", construct_json, "Print JSON instead of the text grid");
  construct->add_flag("--show-test-lines", show_tests, "Number test-line cells in the grid");
  construct->callback([&] {
    Design d = [&]() -> Design {
      if (cyclic_t) return cyclic_auxiliary(cyclic_t, cyclic_block);
      if (construct_path.empty()) throw StructuralError("give a design file or --cyclic t --block ...");
      return load_design(construct_path);
    }();
    if (auto report = validate_design(d); !report.ok()) {
      print_report(report);
      exit_code = kExitInvalid;
      return;
    }
    const SquareArrayDesign sq = as_square(d);
    const std::string dumped = dump_design(to_json(sq));
    if (!construct_out.empty()) write_text(construct_out, dumped);
    if (construct_json)
      std::cout << dumped;
    else
      std::cout << render(sq, show_tests);
  });

  // invert
  std::string invert_path, invert_out;
  auto* invert = app.add_subcommand("invert", "Recover the auxiliary design of a square array");
  invert->add_option("design", invert_path, "Square array JSON")->required();
  invert->add_option("-o,--output", invert_out, "Write the auxiliary design JSON here");
  invert->callback([&] {
    const Design d = load_design(invert_path);
    if (auto report = validate_design(d); !report.ok()) {
      print_report(report);
      exit_code = kExitInvalid;
      return;
    }
    const auto aux = from_square_array(as_square(d));
    if (!invert_out.empty()) write_text(invert_out, dump_design(to_json(aux)));
    std::cout << render(aux);
  });

  // metrics
  std::string metrics_path, metrics_method = "direct";
  bool oracle = false, metrics_csv_out = false;
  auto* metrics = app.add_subcommand("metrics", "Average variance metrics of a design");
  metrics->add_option("design", metrics_path, "Design JSON")->required();
  metrics->add_option("--method", metrics_method, "direct or closed_form")
      ->check(CLI::IsMember({"direct", "closed_form"}));
  metrics->add_flag("--oracle", oracle, "Compute both routes and report the largest discrepancy");
  metrics->add_flag("--csv", metrics_csv_out, "CSV instead of JSON");
  metrics->callback([&] {
    const Design d = load_design(metrics_path);
    if (auto report = validate_design(d); !report.ok()) {
      print_report(report);
      exit_code = kExitInvalid;
      return;
    }
    const SquareArrayDesign sq = as_square(d);
    std::vector<MetricsReport> reports;
    if (oracle || metrics_method == "direct") reports.push_back(direct_metrics(sq));
    if (oracle || metrics_method == "closed_form")
      reports.push_back(closed_or_disconnected(from_square_array(sq)));
    double discrepancy = 0.0;
    if (oracle && reports[0].connected && reports[1].connected) {
      const auto& a = reports[0];
      const auto& b = reports[1];
      for (double diff : {a.a_abd - b.a_abd, a.a_cc - b.a_cc, a.a_ct - b.a_ct, a.a_tt - b.a_tt})
        discrepancy = std::max(discrepancy, std::abs(diff));
    }
    if (metrics_csv_out) {
      metrics_csv(std::cout, reports);
    } else {
      json out = json::object();
      for (const auto& r : reports) out[to_string(r.method)] = to_json(r);
      if (oracle) {
        out["max_discrepancy"] = discrepancy;
        out["ct_tt_relation"] = ct_tt_relation_holds(reports[0], sq.t(), sq.k());
      }
      std::cout << out.dump(2) << '\n';
    }
    if (oracle && (reports[0].connected != reports[1].connected || discrepancy > 1e-6))
      exit_code = kExitInvalid;
  });

  // enumerate
  int en_t = 0, en_k = 0;
  bool connected_only = false;
  auto* enumerate = app.add_subcommand("enumerate", "List canonical cyclic spacing sequences (CSV)");
  enumerate->add_option("--t", en_t, "Number of rows")->required();
  enumerate->add_option("--k", en_k, "Number of controls")->required();
  enumerate->add_flag("--connected", connected_only, "Skip disconnected sequences");
  enumerate->callback([&] {
    const CyclicEvaluator eval(en_t);
    std::cout << "spacings,initial_block,connected,a_abd,a_ct,a_tt\n";
    for (const auto& seq : enumerate_cyclic(en_t, en_k)) {
      auto a = eval.a_abd(seq.spacings());
      if (connected_only && !a) continue;
      std::cout << '"' << seq.to_string() << "\",\"" << join(seq.initial_block()) << "\","
                << (a ? "true" : "false");
      if (a) {
        auto m = closed_form_metrics(en_t, en_k, *a);
        std::cout << ',' << fixed(m.a_abd, 10) << ',' << fixed(m.a_ct, 10) << ','
                  << fixed(m.a_tt, 10) << '\n';
      } else {
        std::cout << ",NA,NA,NA\n";
      }
    }
  });

  // classes
  int cl_t = 0, cl_k = 0;
  bool counts_only = false;
  auto* classes = app.add_subcommand("classes", "Multiplier equivalence classes of cyclic designs");
  classes->add_option("--t", cl_t, "Number of rows")->required();
  classes->add_option("--k", cl_k, "Number of controls")->required();
  classes->add_flag("--counts", counts_only, "Print only the class counts");
  classes->callback([&] {
    const auto all = equivalence_classes(cl_t, cl_k);
    const auto counts = count_classes(all);
    if (counts_only) {
      std::cout << counts.metric_merged << '\n'
                << "metric_merged " << counts.metric_merged << '\n'
                << "connected_orbits " << counts.connected_orbits << '\n'
                << "multiplier_orbits " << counts.multiplier_orbits << '\n';
      return;
    }
    for (const auto& c : all) print_class(c);
    std::cout << "classes: " << counts.metric_merged << " (metric-merged), "
              << counts.connected_orbits << " connected orbits, " << counts.multiplier_orbits
              << " multiplier orbits\n";
  });

  // search
  int se_t = 0, se_k = 0;
  std::vector<int> grid_bounds;
  double min_fraction = 0.15, max_fraction = 0.30;
  auto* search = app.add_subcommand("search", "Minimum-A_tt cyclic design by exhaustive search");
  auto* opt_t = search->add_option("--t", se_t, "Number of rows");
  auto* opt_k = search->add_option("--k", se_k, "Number of controls");
  auto* opt_grid = search->add_option("--grid", grid_bounds, "t_min t_max k_min k_max (CSV output)")
                       ->expected(4)
                       ->excludes(opt_t)
                       ->excludes(opt_k);
  search->add_option("--min-fraction", min_fraction, "Smallest k/t kept on the grid")->needs(opt_grid);
  search->add_option("--max-fraction", max_fraction, "Largest k/t kept on the grid")->needs(opt_grid);
  search->callback([&] {
    if (!grid_bounds.empty()) {
      std::cout << "t,k,control_fraction,in_20_25_window,best,a_abd,a_ct,a_tt,examined\n";
      for (const auto& c : search_grid(grid_bounds[0], grid_bounds[1], grid_bounds[2],
                                       grid_bounds[3], min_fraction, max_fraction))
        std::cout << c.t << ',' << c.k << ',' << fixed(c.control_fraction, 4) << ','
                  << (c.in_kempton_window ? "true" : "false") << ",\""
                  << c.result.best.representative().to_string() << "\","
                  << fixed(c.result.metrics.a_abd, 10) << ',' << fixed(c.result.metrics.a_ct, 10)
                  << ',' << fixed(c.result.metrics.a_tt, 10) << ',' << c.result.examined << '\n';
      return;
    }
    if (!se_t || !se_k) throw StructuralError("give --t and --k, or --grid");
    const auto r = min_metric_search(se_t, se_k);
    std::cout << "examined " << r.examined << " canonical sequences\n";
    print_class(r.best);
    std::cout << "initial block: " << join(r.best.representative().initial_block(), " ") << '\n';
  });

  // randomize
  std::string rz_path, rz_group = "affine", rz_out;
  std::uint64_t rz_seed = 0;
  bool rz_json = false;
  auto* randomize_cmd = app.add_subcommand("randomize", "Randomize rows and columns by a permutation group");
  randomize_cmd->add_option("design", rz_path, "Design JSON")->required();
  randomize_cmd->add_option("--group", rz_group, "affine or file:<generators.json>");
  randomize_cmd->add_option("--seed", rz_seed, "Random seed");
  randomize_cmd->add_option("-o,--output", rz_out, "Write the randomized square array JSON here");
  randomize_cmd->add_flag("--json", rz_json, "Print JSON instead of the text grid");
  randomize_cmd->callback([&] {
    const SquareArrayDesign sq = as_square(load_design(rz_path));
    const PermutationGroup g = checked_group(rz_group, sq.t());
    SeededRng rng(rz_seed);
    const Randomization r = randomize_with(sq, g, rng);
    const std::string dumped = dump_design(to_json(r.design));
    if (!rz_out.empty()) write_text(rz_out, dumped);
    if (rz_json) {
      std::cout << dumped;
      return;
    }
    std::cout << "group order " << g.order() << " (" << to_string(g.provenance()) << ")\n"
              << "rows:    " << join(r.rows.images(), " ") << '\n'
              << "columns: " << join(r.columns.images(), " ") << '\n'
              << render(r.design);
  });

  // spacefill
  std::string sf_path, sf_group = "affine", sf_mode = "exhaustive", sf_values;
  std::size_t sf_n = 10000;
  std::uint64_t sf_seed = 0;
  bool sf_force = false, sf_extremes = false;
  auto* spacefill = app.add_subcommand("spacefill", "Distribution of phi_2 over randomizations");
  spacefill->add_option("design", sf_path, "Design JSON")->required();
  spacefill->add_option("--group", sf_group, "affine or file:<generators.json>");
  spacefill->add_option("--mode", sf_mode, "exhaustive or sample")
      ->check(CLI::IsMember({"exhaustive", "sample"}));
  spacefill->add_option("--n", sf_n, "Number of draws in sample mode");
  spacefill->add_option("--seed", sf_seed, "Random seed for sample mode");
  spacefill->add_flag("--force", sf_force, "Allow exhaustive runs above the pair cap");
  spacefill->add_option("--values", sf_values, "Write every phi_2 value to this CSV");
  spacefill->add_flag("--show-extremes", sf_extremes, "Render the best and worst designs");
  spacefill->callback([&] {
    const SquareArrayDesign sq = as_square(load_design(sf_path));
    const PermutationGroup g = checked_group(sf_group, sq.t());
    SimulationOptions opt;
    opt.mode = sf_mode == "sample" ? SimulationMode::Sample : SimulationMode::Exhaustive;
    opt.samples = sf_n;
    opt.seed = sf_seed;
    opt.force = sf_force;
    const Phi2Simulation sim = simulate_phi2(sq, g, opt);
    const auto& s = sim.summary;
    std::cout << "phi2 of input " << fixed(phi2(sq), 4) << '\n'
              << "designs " << s.n << "  group order " << g.order() << '\n'
              << "min,q1,median,mean,q3,max\n"
              << fixed(s.min, 4) << ',' << fixed(s.q1, 4) << ',' << fixed(s.median, 4) << ','
              << fixed(s.mean, 4) << ',' << fixed(s.q3, 4) << ',' << fixed(s.max, 4) << '\n';
    if (!sf_values.empty()) {
      std::ofstream out(sf_values);
      if (!out) throw Error("cannot write " + sf_values);
      out << "phi2\n" << std::setprecision(10);
      for (double v : sim.values) out << v << '\n';
    }
    if (sf_extremes) {
      auto show = [&](const char* label, std::pair<std::size_t, std::size_t> at) {
        const auto d = permute(sq, g.element(at.first), g.element(at.second));
        std::cout << label << " (phi2 " << fixed(phi2(d), 4) << ")\n" << render(d);
      };
      show("minimum", sim.argmin);
      show("maximum", sim.argmax);
    }
  });

  // catalog
  std::string table_id, fixture_dir = default_fixture_dir();
  bool catalog_csv = false;
  auto* catalog = app.add_subcommand("catalog", "Recompute a published design table from fixtures");
  catalog->add_option("table", table_id, "T1, T3, T4, T5 or T6")
      ->required()
      ->check(CLI::IsMember({"T1", "T3", "T4", "T5", "T6"}));
  catalog->add_option("--fixtures", fixture_dir, "Fixture directory");
  catalog->add_flag("--csv", catalog_csv, "CSV output");
  catalog->callback([&] {
    const Catalog cat = run_catalog(table_id, fixture_dir);
    int failed = 0, better = 0;
    if (catalog_csv) std::cout << "table,key,quantity,expected,computed,abs_diff,status,note\n";
    for (const auto& r : cat.rows) {
      failed += r.status == CatalogStatus::Fail;
      better += r.status == CatalogStatus::BetterThanReference;
      if (catalog_csv) {
        std::cout << r.table_id << ",\"" << r.key << "\"," << r.quantity << ',' << fixed(r.expected, 4)
                  << ',' << fixed(r.computed, 6) << ',' << fixed(r.abs_diff, 6) << ','
                  << to_string(r.status) << ",\"" << r.note << "\"\n";
      } else {
        std::cout << std::left << std::setw(4) << r.table_id << std::setw(34) << r.key
                  << std::setw(18) << r.quantity << std::right << std::setw(10)
                  << fixed(r.expected, 4) << std::setw(12) << fixed(r.computed, 6)
                  << std::setw(11) << fixed(r.abs_diff, 6) << "  " << std::left << std::setw(18)
                  << to_string(r.status) << r.note << std::right << '\n';
      }
    }
    std::cerr << cat.rows.size() << " values, " << failed << " failed, " << better
              << " better than published\n";
    if (failed) exit_code = kExitMismatch;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitError;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ValidationError& e) {
    print_report(e.report());
    return kExitInvalid;
  } catch (const StructuralError& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const RefusedError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitRefused;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return exit_code;
}

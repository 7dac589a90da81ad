#include "collatz/cli.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "collatz/catalog.hpp"
#include "collatz/density.hpp"
#include "collatz/errors.hpp"
#include "collatz/geometry.hpp"
#include "collatz/map.hpp"
#include "collatz/mapio.hpp"
#include "collatz/trajectory.hpp"

namespace collatz {

namespace {

using nlohmann::ordered_json;

ordered_json json_int(const Int& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() &&
      v <= std::numeric_limits<std::int64_t>::max()) {
    return v.convert_to<std::int64_t>();
  }
  return v.str();
}

ordered_json json_point(const LatticePoint& x) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : x) arr.push_back(json_int(c));
  return arr;
}

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    if (comma == std::string::npos) {
      parts.push_back(trimmed(text.substr(start)));
      break;
    }
    parts.push_back(trimmed(text.substr(start, comma - start)));
    start = comma + 1;
  }
  return parts;
}

Int parse_int(const std::string& text, const std::string& what) {
  if (text.empty()) fail(Errc::parse, what + ": empty integer");
  try {
    return Int(text);
  } catch (const std::exception&) {
    fail(Errc::parse, what + ": '" + text + "' is not an integer");
  }
}

LatticePoint parse_point(const std::string& text) {
  LatticePoint out;
  for (const auto& part : split_commas(text))
    out.push_back(parse_int(part, "point coordinate"));
  return out;
}

Rat parse_rat(const std::string& text) {
  const std::string s = trimmed(text);
  if (s.empty()) fail(Errc::parse, "empty number");
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const Int num = parse_int(s.substr(0, slash), "numerator");
    const Int den = parse_int(s.substr(slash + 1), "denominator");
    if (den.is_zero()) fail(Errc::parse, "zero denominator in '" + s + "'");
    return Rat(num, den);
  }
  const auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const std::size_t frac_len = s.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
      fail(Errc::parse, "'" + s + "' is not a number");
    Int scale = 1;
    for (std::size_t i = 0; i < frac_len; ++i) scale *= 10;
    return Rat(parse_int(digits, "number"), scale);
  }
  return Rat(parse_int(s, "number"));
}

Norm parse_norm(const std::string& name) {
  if (name == "euclidean") return Norm::euclidean;
  if (name == "sup") return Norm::sup;
  fail(Errc::parse, "unknown norm '" + name + "'");
}

struct LoadedMap {
  CollatzMap map;
  std::string source;
  std::optional<Section4Params> section4;
};

LoadedMap load_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::parse, "cannot read map file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return LoadedMap{parse_map_json(buf.str()), path, std::nullopt};
}

LoadedMap load_from_catalog(const std::string& name) {
  CatalogEntry entry = catalog_lookup(name);
  return LoadedMap{std::move(entry.map), "catalog:" + name, entry.section4};
}

ordered_json map_digest(const LoadedMap& lm) {
  ordered_json out;
  out["source"] = lm.source;
  out["d"] = json_int(lm.map.modulus());
  out["rank"] = lm.map.rank();
  std::vector<Int> ms;
  for (const auto& e : lm.map.entries()) ms.push_back(e.m);
  std::sort(ms.begin(), ms.end());
  ordered_json arr = ordered_json::array();
  for (const auto& m : ms) arr.push_back(json_int(m));
  out["multipliers"] = std::move(arr);
  return out;
}

ordered_json estimate_json(const DensityEstimate& e) {
  ordered_json out;
  out["value"] = e.value;
  if (e.exact) out["exact"] = to_string(*e.exact);
  out["kind"] = e.kind == EstimateKind::exact ? "exact" : "monte_carlo";
  if (e.ci_halfwidth) out["ci_halfwidth"] = *e.ci_halfwidth;
  if (e.samples) out["samples"] = *e.samples;
  if (e.seed) out["seed"] = *e.seed;
  return out;
}

ordered_json forms_json(const std::vector<IntegerForm>& forms) {
  ordered_json arr = ordered_json::array();
  for (const auto& f : forms) arr.push_back(json_point(f.coeffs()));
  return arr;
}

std::string sign_string(const std::vector<std::int8_t>& signs) {
  std::string s;
  for (const auto v : signs) s += v > 0 ? '+' : '-';
  return s;
}

ordered_json chambers_json(const std::vector<Chamber>& chambers) {
  ordered_json arr = ordered_json::array();
  for (std::size_t i = 0; i < chambers.size(); ++i) {
    ordered_json c;
    c["chamber_id"] = i;
    c["sign_vector"] = sign_string(chambers[i].signs);
    c["wild"] = chambers[i].wild;
    arr.push_back(std::move(c));
  }
  return arr;
}

ordered_json outcome_json(const TrajectoryOutcome& outcome) {
  ordered_json out;
  if (const auto* cycle = std::get_if<Cycle>(&outcome)) {
    out["outcome"] = "cycle";
    out["preperiod"] = cycle->preperiod;
    out["period"] = cycle->period;
  } else if (const auto* div = std::get_if<CertifiedDivergent>(&outcome)) {
    out["outcome"] = "divergent";
    out["witness_step"] = div->witness_step;
  } else {
    out["outcome"] = "cap-exceeded";
    out["steps"] = std::get<ExceededCap>(outcome).steps;
  }
  return out;
}

std::string csv_forms(const std::vector<IntegerForm>& forms, std::size_t rank) {
  std::ostringstream os;
  for (std::size_t j = 0; j < rank; ++j) os << (j ? "," : "") << "a" << j + 1;
  os << "\n";
  for (const auto& f : forms) {
    for (std::size_t j = 0; j < rank; ++j) os << (j ? "," : "") << f.coeffs()[j];
    os << "\n";
  }
  return os.str();
}

std::string csv_chambers(const std::vector<Chamber>& chambers) {
  std::ostringstream os;
  os << "chamber_id,sign_vector,wild\n";
  for (std::size_t i = 0; i < chambers.size(); ++i) {
    os << i << "," << sign_string(chambers[i].signs) << ","
       << (chambers[i].wild ? "true" : "false") << "\n";
  }
  return os.str();
}

void render_text(const ordered_json& j, std::ostream& os, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) {
      const bool nested =
          v.is_object() || (v.is_array() && !v.empty() && (v[0].is_object() || v[0].is_array()));
      if (nested) {
        os << pad << k << ":\n";
        render_text(v, os, indent + 1);
      } else {
        os << pad << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (v.is_object() || v.is_array()) {
        os << pad << "-\n";
        render_text(v, os, indent + 1);
      } else {
        os << pad << "- " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
      }
    }
  } else {
    os << pad << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

ordered_json reproduction_report() {
  ordered_json out;

  {
    ordered_json sec;
    const CollatzMap map = build_zsqrt2_map();
    const auto forms = enumerate_separating_forms(map);
    sec["separating_forms"] = forms_json(forms);
    sec["form_count"] = forms.size();

    const TameCone tame = build_tame_cone(map);
    std::size_t wild = 0;
    for (const auto& c : tame.chambers()) wild += c.wild ? 1 : 0;
    sec["chamber_count"] = tame.chambers().size();
    sec["wild_chamber_count"] = wild;

    sec["divergence_density_bound"] = estimate_json(tame_measure_fraction(tame, Norm::euclidean));
    sec["tame_lattice_density_radius_10"] =
        estimate_json(exact_tame_lattice_density(tame, Rat(10), Norm::euclidean));

    ordered_json ak = ordered_json::array();
    for (std::size_t k = 1; k <= 3; ++k) {
      const AkTable t = ak_fraction(map, k);
      ordered_json row;
      row["k"] = t.k;
      row["a_k"] = to_string(t.fraction);
      row["value"] = to_double(t.fraction);
      ak.push_back(std::move(row));
    }
    sec["stopping_set_fractions"] = std::move(ak);

    const ProductHypothesis h = product_hypothesis(map);
    sec["multiplier_product"] = json_int(h.product);
    sec["product_bound"] = json_int(h.bound);
    sec["product_hypothesis_holds"] = h.holds;

    sec["orbit_1_0"] = outcome_json(detect_cycle(map, LatticePoint{Int(1), Int(0)}, 100));
    sec["orbit_0_0"] = outcome_json(detect_cycle(map, LatticePoint{Int(0), Int(0)}, 100));
    out["zsqrt2"] = std::move(sec);
  }

  {
    ordered_json sec;
    const Section4Params p{3, 1};
    const CollatzMap map = build_section4_map(p);
    const auto forms = enumerate_separating_forms(map);
    sec["form_count"] = forms.size();
    sec["separating_forms"] = forms_json(forms);

    const DensityEstimate bound = divergence_density_bound(map, Norm::euclidean);
    const double closed = section4_closed_form_bound(p);
    sec["divergence_density_bound"] = estimate_json(bound);
    sec["closed_form_bound"] = closed;
    sec["bound_matches_closed_form"] = std::abs(bound.value - closed) < 1e-9;

    ordered_json ak = ordered_json::array();
    for (std::size_t k = 1; k <= 3; ++k) {
      const AkTable t = ak_fraction(map, k);
      ordered_json row;
      row["k"] = t.k;
      row["a_k"] = to_string(t.fraction);
      row["value"] = to_double(t.fraction);
      ak.push_back(std::move(row));
    }
    sec["stopping_set_fractions"] = std::move(ak);

    const ProductHypothesis h = product_hypothesis(map);
    sec["multiplier_product"] = json_int(h.product);
    sec["product_bound"] = json_int(h.bound);
    sec["product_hypothesis_holds"] = h.holds;
    out["section4:d=3,b=1"] = std::move(sec);
  }

  return out;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact toolkit for generalized Collatz mappings on integer lattices"};
  app.name("collatz");
  app.require_subcommand(1);

  std::string map_file;
  std::string catalog_name;
  std::string format = "text";
  std::string out_path;
  bool timing = false;

  std::string point_str;
  std::string radius_str;
  std::string norm_str = "euclidean";

  std::size_t traj_max_steps = 1000;
  bool traj_certify = false;
  std::size_t stop_cap = 1000;
  std::size_t bound_mc_samples = 200000;
  std::uint64_t bound_seed = 12345;
  std::size_t ak_kmax = 8;
  std::size_t sdiv_cap = 100;
  std::size_t sdiv_samples = 500;
  std::uint64_t sdiv_seed = 7;
  std::size_t sstop_cap = 200;
  std::size_t sstop_samples = 500;
  std::uint64_t sstop_seed = 7;

  const auto add_common = [&](CLI::App* sub, bool takes_map) {
    if (takes_map) {
      sub->add_option("--map", map_file, "JSON map file");
      sub->add_option("--catalog", catalog_name, "built-in map name");
    }
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "text", "csv"}));
    sub->add_option("--out", out_path, "write the report to this file");
    sub->add_flag("--timing", timing, "include elapsed milliseconds in the report");
  };

  CLI::App* cmd_validate = app.add_subcommand("validate", "check a map against the invariants");
  add_common(cmd_validate, true);

  CLI::App* cmd_traj = app.add_subcommand("trajectory", "iterate a point and detect its cycle");
  add_common(cmd_traj, true);
  cmd_traj->add_option("--point", point_str, "starting point, comma-separated")->required();
  cmd_traj->add_option("--max-steps", traj_max_steps, "iteration cap");
  cmd_traj->add_flag("--certify-divergence", traj_certify,
                     "certify divergence via the tame cone");

  CLI::App* cmd_stop = app.add_subcommand("stopping", "first norm decrease along the orbit");
  add_common(cmd_stop, true);
  cmd_stop->add_option("--point", point_str, "starting point, comma-separated")->required();
  cmd_stop->add_option("--cap", stop_cap, "step cap");
  cmd_stop->add_option("--norm", norm_str, "norm")->check(CLI::IsMember({"euclidean", "sup"}));

  CLI::App* cmd_forms = app.add_subcommand("hyperplanes", "enumerate all separating forms");
  add_common(cmd_forms, true);

  CLI::App* cmd_cones = app.add_subcommand("cones", "chamber decomposition and wild/tame split");
  add_common(cmd_cones, true);

  CLI::App* cmd_bound = app.add_subcommand("bound", "divergence density lower bound");
  add_common(cmd_bound, true);
  cmd_bound->add_option("--mc-samples", bound_mc_samples, "Monte Carlo samples (rank >= 3)");
  cmd_bound->add_option("--seed", bound_seed, "Monte Carlo seed");
  cmd_bound->add_option("--norm", norm_str, "norm")->check(CLI::IsMember({"euclidean", "sup"}));

  CLI::App* cmd_dens = app.add_subcommand("density-exact", "exact tame share of ball lattice points");
  add_common(cmd_dens, true);
  cmd_dens->add_option("--radius", radius_str, "radii, comma-separated")->required();

  CLI::App* cmd_ak = app.add_subcommand("ak", "stopping-set fractions a_k");
  add_common(cmd_ak, true);
  cmd_ak->add_option("--k-max", ak_kmax, "largest k");

  CLI::App* cmd_hyp = app.add_subcommand("hypothesis", "multiplier product vs d^(d^e)");
  add_common(cmd_hyp, true);

  CLI::App* cmd_sdiv = app.add_subcommand("sample-divergent",
                                          "fraction of sampled points certified divergent");
  add_common(cmd_sdiv, true);
  cmd_sdiv->add_option("--radius", radius_str, "sampling radius")->required();
  cmd_sdiv->add_option("--samples", sdiv_samples, "sample count");
  cmd_sdiv->add_option("--seed", sdiv_seed, "sampling seed");
  cmd_sdiv->add_option("--cap", sdiv_cap, "iteration cap per point");

  CLI::App* cmd_sstop = app.add_subcommand("sample-stopping",
                                           "fraction of sampled points that stop");
  add_common(cmd_sstop, true);
  cmd_sstop->add_option("--radius", radius_str, "sampling radius")->required();
  cmd_sstop->add_option("--samples", sstop_samples, "sample count");
  cmd_sstop->add_option("--seed", sstop_seed, "sampling seed");
  cmd_sstop->add_option("--cap", sstop_cap, "stopping-time cap per point");
  cmd_sstop->add_option("--norm", norm_str, "norm")->check(CLI::IsMember({"euclidean", "sup"}));

  CLI::App* cmd_report = app.add_subcommand("report", "built-in example reproduction suite");
  add_common(cmd_report, false);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App* cmd = app.get_subcommands().front();
  const bool takes_map = cmd != cmd_report;
  if (takes_map && map_file.empty() == catalog_name.empty()) {
    err << "error: provide exactly one of --map FILE or --catalog NAME\n";
    return 2;
  }
  const bool csv_ok = cmd == cmd_forms || cmd == cmd_cones || cmd == cmd_dens || cmd == cmd_ak;
  if (format == "csv" && !csv_ok) {
    err << "error: csv output is only available for hyperplanes, cones, density-exact, ak\n";
    return 2;
  }

  try {
    const auto started = std::chrono::steady_clock::now();
    ordered_json report;
    report["command"] = cmd->get_name();
    std::string csv;

    std::optional<LoadedMap> lm;
    if (takes_map) {
      lm = map_file.empty() ? load_from_catalog(catalog_name) : load_from_file(map_file);
      report["map"] = map_digest(*lm);
    }
    ordered_json results;

    if (cmd == cmd_validate) {
      const CollatzMap& map = lm->map;
      results["valid"] = true;
      results["residue_count"] = map.entries().size();
      results["relatively_prime_type"] = is_relatively_prime_type(map);
      results["shift_span_rank"] = shift_span_rank(map);
      results["acute_shifts"] =
          strictly_positive_witness(map.nonzero_shifts(), map.rank()).has_value();
    } else if (cmd == cmd_traj) {
      const LatticePoint x = parse_point(point_str);
      std::optional<TameCone> tame;
      if (traj_certify) tame.emplace(build_tame_cone(lm->map));
      const auto outcome = detect_cycle(lm->map, x, traj_max_steps, tame ? &*tame : nullptr);
      results["point"] = json_point(x);
      results["max_steps"] = traj_max_steps;
      results.update(outcome_json(outcome));
    } else if (cmd == cmd_stop) {
      const LatticePoint x = parse_point(point_str);
      const auto res = stopping_time(lm->map, x, parse_norm(norm_str), stop_cap);
      results["point"] = json_point(x);
      results["norm"] = norm_str;
      results["cap"] = res.cap;
      if (res.k)
        results["stopping_time"] = *res.k;
      else
        results["stopping_time"] = nullptr;
    } else if (cmd == cmd_forms) {
      const auto forms = enumerate_separating_forms(lm->map);
      results["count"] = forms.size();
      results["forms"] = forms_json(forms);
      csv = csv_forms(forms, lm->map.rank());
    } else if (cmd == cmd_cones) {
      const TameCone tame = build_tame_cone(lm->map);
      std::size_t wild = 0;
      for (const auto& c : tame.chambers()) wild += c.wild ? 1 : 0;
      results["forms"] = forms_json(tame.forms());
      ordered_json gens = ordered_json::array();
      for (const auto& g : tame.shift_cone().generators) gens.push_back(json_point(g));
      results["shift_cone_generators"] = std::move(gens);
      results["chamber_count"] = tame.chambers().size();
      results["wild_chamber_count"] = wild;
      results["chambers"] = chambers_json(tame.chambers());
      csv = csv_chambers(tame.chambers());
    } else if (cmd == cmd_bound) {
      const McOptions mc{bound_mc_samples, bound_seed};
      const auto est = divergence_density_bound(lm->map, parse_norm(norm_str), mc);
      results["norm"] = norm_str;
      results["bound"] = estimate_json(est);
      if (lm->section4)
        results["closed_form_bound"] = section4_closed_form_bound(*lm->section4);
    } else if (cmd == cmd_dens) {
      const TameCone tame = build_tame_cone(lm->map);
      ordered_json rows = ordered_json::array();
      std::ostringstream os;
      os.precision(12);
      os << "radius,exact_density,value\n";
      for (const auto& part : split_commas(radius_str)) {
        const Rat radius = parse_rat(part);
        const auto est = exact_tame_lattice_density(tame, radius, Norm::euclidean);
        ordered_json row;
        row["radius"] = to_string(radius);
        row["exact_density"] = to_string(*est.exact);
        row["value"] = est.value;
        rows.push_back(std::move(row));
        os << to_string(radius) << "," << to_string(*est.exact) << "," << est.value << "\n";
      }
      results["radii"] = std::move(rows);
      csv = os.str();
    } else if (cmd == cmd_ak) {
      ordered_json rows = ordered_json::array();
      std::ostringstream os;
      os.precision(12);
      os << "k,a_k,value\n";
      for (std::size_t k = 1; k <= ak_kmax; ++k) {
        const AkTable t = ak_fraction(lm->map, k);
        ordered_json row;
        row["k"] = t.k;
        row["a_k"] = to_string(t.fraction);
        row["value"] = to_double(t.fraction);
        rows.push_back(std::move(row));
        os << t.k << "," << to_string(t.fraction) << "," << to_double(t.fraction) << "\n";
      }
      results["table"] = std::move(rows);
      csv = os.str();
    } else if (cmd == cmd_hyp) {
      const ProductHypothesis h = product_hypothesis(lm->map);
      results["product"] = json_int(h.product);
      results["bound"] = json_int(h.bound);
      results["holds"] = h.holds;
    } else if (cmd == cmd_sdiv) {
      const Rat radius = parse_rat(radius_str);
      const auto est =
          empirical_divergence_fraction(lm->map, radius, sdiv_cap, sdiv_samples, sdiv_seed);
      results["radius"] = to_string(radius);
      results["cap"] = sdiv_cap;
      results["divergent_fraction"] = estimate_json(est);
    } else if (cmd == cmd_sstop) {
      const Rat radius = parse_rat(radius_str);
      const auto est = empirical_stopping_fraction(lm->map, radius, sstop_cap, sstop_samples,
                                                   sstop_seed, parse_norm(norm_str));
      results["radius"] = to_string(radius);
      results["cap"] = sstop_cap;
      results["norm"] = norm_str;
      results["stopped_fraction"] = estimate_json(est);
    } else {
      results = reproduction_report();
    }

    report["results"] = std::move(results);
    if (timing) {
      const auto elapsed = std::chrono::steady_clock::now() - started;
      report["timing_ms"] =
          std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count();
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) {
        err << "error: cannot open output file '" << out_path << "'\n";
        return 1;
      }
      sink = &file;
    }
    if (format == "json")
      *sink << report.dump(2) << "\n";
    else if (format == "csv")
      *sink << csv;
    else
      render_text(report, *sink, 0);
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace collatz

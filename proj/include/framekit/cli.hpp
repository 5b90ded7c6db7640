#pragma once

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "framekit/verify.hpp"

namespace framekit::cli {

// Exit codes: 0 = verdict computed (negative verdicts included),
// 1 = usage error, 2 = input error, 3 = numerical failure.

inline int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::NumericallySingular:
    case Errc::NumericalFailure:
      return 3;
    default:
      return 2;
  }
}

inline std::vector<Index> parse_index_list(const std::string& text) {
  std::vector<Index> out;
  std::string cell;
  std::istringstream in(text);
  while (std::getline(in, cell, ',')) {
    if (cell.empty()) continue;
    try {
      const long long v = std::stoll(cell);
      if (v < 1) throw Error(Errc::IndexOutOfRange, "indices are 1-based, got " + cell);
      out.push_back(static_cast<Index>(v - 1));
    } catch (const std::invalid_argument&) {
      throw Error(Errc::ParseError, "bad index '" + cell + "' in list");
    } catch (const std::out_of_range&) {
      throw Error(Errc::ParseError, "index '" + cell + "' out of range");
    }
  }
  return out;
}

inline Json index_list_json(const std::vector<Index>& indices) {
  Json out = Json::array();
  for (Index i : indices) out.push_back(i + 1);
  return out;
}

inline Json bounds_json(const FrameBounds& b) {
  return Json{{"lower", b.lower}, {"upper", b.upper}};
}

inline Json mrc_verdict_json(const MrcVerdict& v) {
  return Json{{"satisfied", v.satisfied},
              {"certificate", v.certificate},
              {"threshold", v.threshold},
              {"marginal", v.marginal},
              {"reduced_bounds", v.reduced_bounds ? bounds_json(*v.reduced_bounds) : Json()}};
}

inline Json robustness_json(const RobustnessReport& r) {
  Json strategy = Json{{"kind", r.exhaustive ? "exhaustive" : "sampled"}};
  if (!r.exhaustive) {
    strategy["seed"] = r.seed;
    strategy["trials"] = r.trials;
  }
  return Json{{"m", r.m},
              {"robust", r.robust},
              {"checked_subsets", r.checked_subsets},
              {"failing_subset", r.failing_subset ? index_list_json(*r.failing_subset) : Json()},
              {"strategy", std::move(strategy)}};
}

inline Json bridge_plan_json(const BridgePlan& plan) {
  return Json{{"found", true},
              {"erased", index_list_json(plan.erased.indices())},
              {"delta", index_list_json(plan.delta)},
              {"coefficients", matrix_to_json(plan.coefficients)},
              {"replacement_duals", matrix_to_json(plan.replacement_duals)},
              {"residual", plan.residual}};
}

inline Json channel_report_json(const ChannelReport& report) {
  Json records = Json::array();
  for (const auto& r : report.records) {
    records.push_back(Json{{"signal", r.signal},
                           {"erased", index_list_json(r.erased)},
                           {"bridge_size", r.bridge_size ? Json(*r.bridge_size) : Json()},
                           {"relative_error", r.relative_error ? Json(*r.relative_error) : Json()},
                           {"failure", r.failure ? Json(*r.failure) : Json()}});
  }
  return Json{{"records", std::move(records)}, {"failures", report.failures}};
}

inline ErasureModel parse_model(const std::string& text, std::uint64_t seed) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  try {
    if (kind == "random") {
      const double p = std::stod(rest);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(Errc::ParseError, "erasure probability must lie in [0,1]");
      }
      return RandomErasures{p, seed};
    }
    if (kind == "burst") {
      const auto comma = rest.find(',');
      if (comma == std::string::npos) {
        throw Error(Errc::ParseError, "burst model needs start,length");
      }
      const long long start = std::stoll(rest.substr(0, comma));
      const long long len = std::stoll(rest.substr(comma + 1));
      if (start < 1 || len < 0) throw Error(Errc::ParseError, "burst start is 1-based");
      return BurstErasure{static_cast<Index>(start - 1), static_cast<Index>(len)};
    }
    if (kind == "fixed") {
      return FixedErasures{parse_index_list(rest)};
    }
  } catch (const std::invalid_argument&) {
    throw Error(Errc::ParseError, "bad model parameter in '" + text + "'");
  } catch (const std::out_of_range&) {
    throw Error(Errc::ParseError, "model parameter out of range in '" + text + "'");
  }
  throw Error(Errc::ParseError, "unknown erasure model '" + text + "' (random:p, burst:s,l, fixed:i,j)");
}

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

/// Runs one CLI invocation. argv excludes the program name. The report's
/// verdict payload is printed to `out` and, when the subcommand takes
/// --out, either the artifact (gen, dual, dilate) or the full report is
/// written there.
inline int run_command(const std::vector<std::string>& args, Report* report_out = nullptr,
                       std::ostream* out_stream = nullptr) {
  std::ostream& out = out_stream ? *out_stream : std::cout;

  CLI::App app{"framekit: finite-frame erasure analysis and recovery"};
  app.require_subcommand(1);

  RunConfig config;
  std::uint64_t& seed = config.seed;
  std::string& out_path = config.output_path;
  ToleranceConfig& cli_tol = config.tol;

  // gen
  auto* gen = app.add_subcommand("gen", "generate a seeded random frame");
  Index gen_dim = 2, gen_count = 3;
  std::string gen_kind = "generic";
  gen->add_option("--dim", gen_dim, "ambient dimension")->required();
  gen->add_option("--count", gen_count, "number of frame vectors")->required();
  gen->add_option("--kind", gen_kind, "generic|parseval|tight")
      ->check(CLI::IsMember({"generic", "parseval", "tight"}));
  gen->add_option("--seed", seed, "random seed (FRAMEKIT_SEED overrides)");
  gen->add_option("--rank-tol", cli_tol.rank_tol, "relative rank threshold");
  gen->add_option("--eq-tol", cli_tol.eq_tol, "absolute equality threshold");
  gen->add_option("--out", out_path, "write the frame JSON here");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "frame bounds, Gramian, spark, excess");
  std::string analyze_frame;
  analyze->add_option("--frame", analyze_frame, "frame JSON file")->required();

  // dual
  auto* dual = app.add_subcommand("dual", "canonical or perturbed dual pair");
  std::string dual_frame;
  bool dual_canonical = false;
  std::optional<std::uint64_t> dual_perturb_seed;
  dual->add_option("--frame", dual_frame, "frame JSON file")->required();
  dual->add_flag("--canonical", dual_canonical, "canonical dual (default)");
  dual->add_option("--perturb-seed", dual_perturb_seed, "seeded alternate dual");
  dual->add_option("--out", out_path, "write the dual pair JSON here");

  // mrc
  auto* mrc = app.add_subcommand("mrc", "minimal redundancy condition verdict");
  std::string mrc_frame, mrc_erase, mrc_dual;
  mrc->add_option("--frame", mrc_frame, "frame JSON file")->required();
  mrc->add_option("--erase", mrc_erase, "comma-separated 1-based indices")->required();
  mrc->add_option("--dual", mrc_dual, "'canonical' or a dual frame JSON file");
  mrc->add_option("--out", out_path, "write the full report here");

  // robustness
  auto* robust = app.add_subcommand("robustness", "m-erasure robustness verdict");
  std::string robust_frame;
  Index robust_m = 1;
  bool robust_exhaustive = false;
  std::optional<std::uint64_t> robust_sample;
  robust->add_option("--frame", robust_frame, "frame JSON file")->required();
  robust->add_option("--m", robust_m, "number of erasures")->required();
  robust->add_flag("--exhaustive", robust_exhaustive, "force full enumeration");
  robust->add_option("--sample", robust_sample, "sampled trials instead of enumeration");
  robust->add_option("--seed", seed, "sampling seed (FRAMEKIT_SEED overrides)");
  robust->add_option("--out", out_path, "write the full report here");

  // gamma
  auto* gamma_cmd = app.add_subcommand("gamma", "expansion-coefficient matrix");
  std::string gamma_frame;
  Index gamma_m = 1;
  bool gamma_reorder = false;
  gamma_cmd->add_option("--frame", gamma_frame, "frame JSON file")->required();
  gamma_cmd->add_option("--m", gamma_m, "head size")->required();
  gamma_cmd->add_flag("--reorder", gamma_reorder, "permute so the tail is a basis");
  gamma_cmd->add_option("--out", out_path, "write the full report here");

  // excess
  auto* excess_cmd = app.add_subcommand("excess", "sup and uniform excess");
  std::string excess_frame;
  excess_cmd->add_option("--frame", excess_frame, "frame JSON file")->required();
  excess_cmd->add_option("--out", out_path, "write the full report here");

  // bridge
  auto* bridge = app.add_subcommand("bridge", "bridge-set plan and optional recovery");
  std::string bridge_pair, bridge_erase, bridge_delta, bridge_coeffs, bridge_side = "dual";
  bridge->add_option("--pair", bridge_pair, "dual pair (or bare frame) JSON file")->required();
  bridge->add_option("--erase", bridge_erase, "comma-separated 1-based indices")->required();
  bridge->add_option("--delta", bridge_delta, "bridge indices; searched when omitted");
  bridge->add_option("--coeffs", bridge_coeffs, "received coefficient CSV to recover");
  bridge->add_option("--coeff-side", bridge_side, "dual|analysis coefficient convention")
      ->check(CLI::IsMember({"dual", "analysis"}));
  bridge->add_option("--out", out_path, "write the full report here");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "erasure-channel simulation");
  std::string sim_pair, sim_signals, sim_model = "random:0.1", sim_side = "dual";
  simulate->add_option("--pair", sim_pair, "dual pair (or bare frame) JSON file")->required();
  simulate->add_option("--signals", sim_signals, "signal CSV (signal_id,index,re,im)")->required();
  simulate->add_option("--model", sim_model, "random:p | burst:start,len | fixed:i,j");
  simulate->add_option("--seed", seed, "model seed (FRAMEKIT_SEED overrides)");
  simulate->add_option("--coeff-side", sim_side, "dual|analysis coefficient convention")
      ->check(CLI::IsMember({"dual", "analysis"}));
  simulate->add_option("--out", out_path, "write the full report here");

  // dilate
  auto* dilate = app.add_subcommand("dilate", "orthonormal dilation of a frame");
  std::string dilate_frame;
  dilate->add_option("--frame", dilate_frame, "frame JSON file")->required();
  dilate->add_option("--out", out_path, "write the dilation JSON here");

  // certify-1-erasure
  auto* certify = app.add_subcommand("certify-1-erasure", "nonzero dependency certificate");
  std::string certify_frame;
  certify->add_option("--frame", certify_frame, "frame JSON file")->required();
  certify->add_option("--out", out_path, "write the full report here");

  // verify-all
  auto* verify = app.add_subcommand("verify-all", "run the seeded property suite");
  std::optional<int> verify_frames;
  verify->add_option("--seed", seed, "suite seed (FRAMEKIT_SEED overrides)");
  verify->add_option("--frames", verify_frames, "override per-check instance counts");
  verify->add_option("--budget", config.subset_budget, "subset enumeration budget");
  verify->add_option("--out", out_path, "write the full report here");

  try {
    std::vector<std::string> argv_copy(args);
    std::reverse(argv_copy.begin(), argv_copy.end());
    app.parse(argv_copy);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    out << "usage error: " << e.what() << "\n";
    return 1;
  }

  if (const char* env_seed = std::getenv("FRAMEKIT_SEED")) {
    try {
      seed = std::stoull(env_seed);
    } catch (...) {
      out << "warning: ignoring unparsable FRAMEKIT_SEED\n";
    }
  }

  Report report;
  const Timer total;
  try {
    if (app.got_subcommand(gen)) {
      report.command = "gen";
      report.inputs_digest = fnv1a_hex("");
      const FrameKind kind = gen_kind == "parseval" ? FrameKind::Parseval
                             : gen_kind == "tight"  ? FrameKind::Tight
                                                    : FrameKind::Generic;
      const Frame f = random_frame(gen_dim, gen_count, seed, kind, cli_tol);
      report.verdicts = Json{{"seed", seed}, {"kind", gen_kind}, {"frame", frame_to_json(f)}};
      if (!out_path.empty()) write_text_file(out_path, frame_to_json(f).dump(2) + "\n");
    } else if (app.got_subcommand(analyze)) {
      report.command = "analyze";
      report.inputs_digest = digest_files({analyze_frame});
      const Frame f = parse_frame_file(analyze_frame);
      const FrameBounds bounds = frame_bounds(f);
      const ExcessReport ex = excess(f);
      report.verdicts = Json{{"dim", f.dim()},
                             {"count", f.size()},
                             {"field", f.field() == ScalarField::Real ? "real" : "complex"},
                             {"bounds", bounds_json(bounds)},
                             {"tight", bounds.tight(f.tol().eq_tol)},
                             {"parseval", bounds.parseval(f.tol().eq_tol)},
                             {"spark", spark(f)},
                             {"excess", Json{{"sup_excess", ex.sup_excess},
                                             {"uniform_excess", ex.uniform_excess}}},
                             {"frame_operator", matrix_to_json(frame_operator(f))},
                             {"gramian", matrix_to_json(gramian(f))}};
    } else if (app.got_subcommand(dual)) {
      report.command = "dual";
      report.inputs_digest = digest_files({dual_frame});
      const Frame f = parse_frame_file(dual_frame);
      DualPair pair = canonical_dual(f);
      if (dual_perturb_seed) {
        pair = perturbed_dual(pair, random_dual_perturbation(f, *dual_perturb_seed));
      }
      const DualCheck check = is_dual_pair(pair.primary(), pair.dual());
      report.verdicts = Json{{"canonical", !dual_perturb_seed.has_value()},
                             {"residual", check.residual},
                             {"pair", dual_pair_to_json(pair)}};
      if (!out_path.empty()) write_text_file(out_path, dual_pair_to_json(pair).dump(2) + "\n");
    } else if (app.got_subcommand(mrc)) {
      report.command = "mrc";
      report.inputs_digest =
          digest_files(mrc_dual.empty() || mrc_dual == "canonical"
                           ? std::vector<std::string>{mrc_frame}
                           : std::vector<std::string>{mrc_frame, mrc_dual});
      const Frame f = parse_frame_file(mrc_frame);
      const ErasureSet erased = ErasureSet::of(parse_index_list(mrc_erase), f.size());
      Frame target = f;
      if (mrc_dual == "canonical") {
        target = canonical_dual(f).dual();
      } else if (!mrc_dual.empty()) {
        target = parse_frame_file(mrc_dual);
      }
      report.verdicts = mrc_verdict_json(satisfies_mrc(target, erased));
      report.verdicts["erased"] = index_list_json(erased.indices());
    } else if (app.got_subcommand(robust)) {
      report.command = "robustness";
      report.inputs_digest = digest_files({robust_frame});
      const Frame f = parse_frame_file(robust_frame);
      SubsetStrategy strategy;
      if (robust_exhaustive && robust_sample) {
        throw Error(Errc::ParseError, "--exhaustive and --sample are mutually exclusive");
      }
      if (robust_exhaustive) strategy.kind = SubsetStrategy::Kind::Exhaustive;
      if (robust_sample) {
        strategy.kind = SubsetStrategy::Kind::Sampled;
        strategy.trials = *robust_sample;
        strategy.seed = seed;
      }
      report.verdicts = robustness_json(is_m_erasure_robust(f, robust_m, strategy));
    } else if (app.got_subcommand(gamma_cmd)) {
      report.command = "gamma";
      report.inputs_digest = digest_files({gamma_frame});
      Frame f = parse_frame_file(gamma_frame);
      Json permutation;
      if (gamma_reorder) {
        ReorderedFrame reordered = reorder_for_basis_tail(f, gamma_m);
        f = reordered.frame;
        permutation = index_list_json(reordered.permutation);
      }
      const GammaMatrix g = build_gamma(f, gamma_m);
      const RangeNullspaceCheck check = verify_range_equals_nullspace(f, g);
      report.verdicts = Json{{"m", g.m},
                             {"entries", matrix_to_json(g.entries)},
                             {"permutation", permutation},
                             {"range_nullspace",
                              Json{{"equal", check.equal},
                                   {"residual", check.max_residual},
                                   {"range_dim", check.range_dim},
                                   {"nullspace_dim", check.nullspace_dim}}}};
    } else if (app.got_subcommand(excess_cmd)) {
      report.command = "excess";
      report.inputs_digest = digest_files({excess_frame});
      const Frame f = parse_frame_file(excess_frame);
      const ExcessReport ex = excess(f);
      report.verdicts =
          Json{{"sup_excess", ex.sup_excess}, {"uniform_excess", ex.uniform_excess}};
    } else if (app.got_subcommand(bridge)) {
      report.command = "bridge";
      report.inputs_digest = digest_files(bridge_coeffs.empty()
                                              ? std::vector<std::string>{bridge_pair}
                                              : std::vector<std::string>{bridge_pair, bridge_coeffs});
      DualPair pair = parse_pair_file(bridge_pair);
      if (bridge_side == "analysis") pair = pair.swapped();
      const ErasureSet erased = ErasureSet::of(parse_index_list(bridge_erase), pair.size());
      try {
        const BridgePlan plan = bridge_delta.empty()
                                    ? find_bridge_set(pair, erased)
                                    : solve_bridge(pair, erased, parse_index_list(bridge_delta));
        report.verdicts = bridge_plan_json(plan);
        if (!bridge_coeffs.empty()) {
          Json recovered = Json::array();
          for (const auto& [id, received] :
               received_from_stream(parse_coefficient_csv(bridge_coeffs), pair.size())) {
            try {
              recovered.push_back(
                  Json{{"signal", id}, {"vector", vector_to_json(recover(pair, plan, received))}});
            } catch (const Error& e) {
              recovered.push_back(Json{{"signal", id}, {"error", errc_name(e.code())}});
            }
          }
          report.verdicts["recovered"] = std::move(recovered);
        }
      } catch (const NoBridgeError& e) {
        report.verdicts = Json{{"found", false},
                               {"erased", index_list_json(erased.indices())},
                               {"residual", e.residual()},
                               {"reason", "no bridge set exists; the erased set violates the "
                                          "minimal redundancy condition or delta is insufficient"}};
      }
    } else if (app.got_subcommand(simulate)) {
      report.command = "simulate";
      report.inputs_digest = digest_files({sim_pair, sim_signals});
      DualPair pair = parse_pair_file(sim_pair);
      if (sim_side == "analysis") pair = pair.swapped();
      const std::vector<Vector> signals =
          signals_from_stream(parse_coefficient_csv(sim_signals), pair.dim());
      const ErasureModel model = parse_model(sim_model, seed);
      report.verdicts = channel_report_json(simulate_channel(pair, signals, model));
      report.verdicts["model"] = sim_model;
      report.verdicts["seed"] = seed;
    } else if (app.got_subcommand(dilate)) {
      report.command = "dilate";
      report.inputs_digest = digest_files({dilate_frame});
      const Frame f = parse_frame_file(dilate_frame);
      const Dilation d = naimark_dilate(f);
      report.verdicts = dilation_to_json(d);
      if (!out_path.empty()) write_text_file(out_path, dilation_to_json(d).dump(2) + "\n");
    } else if (app.got_subcommand(certify)) {
      report.command = "certify-1-erasure";
      report.inputs_digest = digest_files({certify_frame});
      const Frame f = parse_frame_file(certify_frame);
      const OneErasureCertificate cert = one_erasure_certificate(f);
      report.verdicts =
          Json{{"robust", cert.present()},
               {"coefficients", cert.coefficients ? vector_to_json(*cert.coefficients) : Json()},
               {"witness_index", cert.witness_index ? Json(*cert.witness_index + 1) : Json()},
               {"residual", cert.coefficients
                                ? max_abs(f.synthesis() * *cert.coefficients)
                                : 0.0}};
    } else if (app.got_subcommand(verify)) {
      report.command = "verify-all";
      report.inputs_digest = fnv1a_hex("");
      VerifyOptions opts;
      opts.seed = seed;
      opts.tol = config.tol;
      opts.subset_budget = config.subset_budget;
      if (verify_frames) opts.scale_counts(*verify_frames);
      const std::vector<CheckResult> checks = run_all_checks(opts);
      report.verdicts = Json{{"seed", seed}, {"checks", checks_to_json(checks)}};
      bool all_pass = true;
      for (const auto& c : checks) all_pass = all_pass && c.pass;
      report.verdicts["all_pass"] = all_pass;
    }
  } catch (const Error& e) {
    out << Json{{"error", errc_name(e.code())}, {"message", e.what()}}.dump(2) << "\n";
    return exit_code_for(e);
  }

  report.timings["total_ms"] = total.ms();
  out << report.verdicts.dump(2) << "\n";

  const bool artifact_command = app.got_subcommand(gen) || app.got_subcommand(dual) ||
                                app.got_subcommand(dilate);
  if (!out_path.empty() && !artifact_command) write_report(report, out_path);
  if (report_out) *report_out = report;
  return 0;
}

}  // namespace framekit::cli

// relgeo: finite-scale diagnostics for relative hyperbolicity.
//
// Every command is a pure function of its flags: the seed is recorded in the
// artifact and re-running with the same configuration reproduces it byte for
// byte. Exit codes: 0 success/pass, 1 property failure (the artifact carries
// the witnesses), 2 usage or input error.

#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "relgeo/cayley.hpp"
#include "relgeo/hyperbolicity.hpp"
#include "relgeo/netapprox.hpp"
#include "relgeo/parallel.hpp"
#include "relgeo/relhyp.hpp"
#include "relgeo/report.hpp"
#include "relgeo/smallcancel.hpp"
#include "relgeo/treegraded.hpp"

using namespace relgeo;

namespace {

struct RadiusRange {
  int lo = 3, hi = 3;
};

RadiusRange parse_range(const std::string& s) {
  RadiusRange r;
  auto dots = s.find("..");
  if (dots == std::string::npos) {
    r.lo = r.hi = std::stoi(s);
  } else {
    r.lo = std::stoi(s.substr(0, dots));
    r.hi = std::stoi(s.substr(dots + 2));
  }
  if (r.lo < 0 || r.hi < r.lo) throw CLI::ValidationError("--r", "bad radius range");
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
  out << content;
}

std::unique_ptr<GroupOracle> load_group(const std::string& name) {
  if (name.rfind("eo:", 0) == 0)
    return make_dehn_oracle(parse_presentation(slurp(name.substr(3))));
  return make_registry_oracle(name);
}

struct Common {
  std::string group = "free-rel-a";
  std::string range = "3";
  std::string out;
  std::string format = "json";
  std::uint64_t seed = 1;
  double bound = -1;  // <0: measure only; >=0: exit 1 when exceeded

  void attach(CLI::App* cmd, bool with_bound = true) {
    cmd->add_option("--group", group, "group registry name or eo:<presentation file>");
    cmd->add_option("--r", range, "radius or radius range A..B");
    cmd->add_option("--out", out, "artifact path (default stdout)");
    cmd->add_option("--format", format, "json|csv")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--seed", seed, "random seed, recorded in the artifact");
    if (with_bound)
      cmd->add_option("--bound", bound, "pass/fail threshold for the headline measurement");
  }

  RelBallGraph rel_ball(const GroupOracle& oracle, int r) const {
    BallGraph ball = enumerate_ball(oracle, r);
    if (oracle.presentation().parabolics.empty()) return plain_relative_ball(std::move(ball));
    return build_relative_ball(std::move(ball), oracle);
  }

  int finish(AlphaReport rep, const std::string& headline) {
    rep.params["group"] = group;
    rep.params["seed"] = std::to_string(seed);
    bool fail = false;
    if (bound >= 0) {
      for (const auto& e : rep.per_radius)
        if (e.measured.count(headline) && e.measured.at(headline) > bound) fail = true;
      rep.verdict = fail ? "fail" : "pass";
    }
    emit(out, format == "csv" ? rep.to_csv() : rep.to_json());
    return fail ? 1 : 0;
  }
};

int cmd_ball(const Common& c, bool relative) {
  auto oracle = load_group(c.group);
  RadiusRange rr = parse_range(c.range);
  std::ostringstream os;
  for (int r = rr.lo; r <= rr.hi; ++r) {
    os << "# relgeo " << (relative ? "relball" : "ball") << " group=" << c.group << " r=" << r
       << " seed=" << c.seed << '\n';
    if (relative) {
      RelBallGraph rel = c.rel_ball(*oracle, r);
      os << rel.export_text(oracle->presentation().generator_names);
    } else {
      BallGraph ball = enumerate_ball(*oracle, r);
      os << ball.export_text(oracle->presentation().generator_names);
    }
  }
  emit(c.out, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-scale relative hyperbolicity toolkit"};
  app.require_subcommand(1);

  Common ball_c;
  CLI::App* ball = app.add_subcommand("ball", "enumerate a Cayley ball and export it");
  ball_c.attach(ball, false);
  Common relball_c;
  CLI::App* relball =
      app.add_subcommand("relball", "enumerate a relative Cayley ball and export it");
  relball_c.attach(relball, false);

  Common alpha_c;
  int alpha_which = 1;
  std::string alpha_delta = "1", alpha_theta = "1/3";
  std::string fat_theta = "1", fat_sigma = "2", fat_nu = "8";
  int alpha_k = 3, alpha_samples = 2000;
  CLI::App* alpha = app.add_subcommand("alpha", "alpha_1/alpha_2/alpha_3 certificates");
  alpha_c.attach(alpha);
  alpha->add_option("--which", alpha_which, "which condition: 1, 2 or 3")
      ->check(CLI::Range(1, 3));
  alpha->add_option("--delta", alpha_delta, "alpha_1 neighborhood radius");
  alpha->add_option("--theta", alpha_theta, "alpha_2 endpoint fraction, in [0,1/2)");
  alpha->add_option("--fat-theta", fat_theta, "alpha_3 fatness theta");
  alpha->add_option("--fat-sigma", fat_sigma, "alpha_3 fatness sigma");
  alpha->add_option("--fat-nu", fat_nu, "alpha_3 fatness nu (>= 4 sigma)");
  alpha->add_option("--k", alpha_k, "alpha_3 polygon corners (3 or 4)");
  alpha->add_option("--samples", alpha_samples, "alpha_3 sampled polygons per radius");

  Common bcp_c;
  std::string bcp_lambda = "1";
  int bcp_cap = 6;
  CLI::App* bcp = app.add_subcommand("bcp", "bounded coset penetration constants");
  bcp_c.attach(bcp);
  bcp->add_option("--lambda", bcp_lambda, "bi-Lipschitz constant, >= 1");
  bcp->add_option("--len-cap", bcp_cap, "path length cap");

  Common morse_c;
  std::string morse_L = "2", morse_C = "0", morse_M = "1";
  int morse_samples = 100;
  CLI::App* morse = app.add_subcommand("morse", "Morse diagnostics over sampled quasi-geodesics");
  morse_c.attach(morse);
  morse->add_option("--L", morse_L, "quasi-geodesic multiplicative constant");
  morse->add_option("--C", morse_C, "quasi-geodesic additive constant");
  morse->add_option("--M", morse_M, "saturation radius");
  morse->add_option("--samples", morse_samples, "sampled quasi-geodesics per radius");

  Common bow_c;
  std::string bow_kappa = "1", bow_mu = "0";
  bool bow_sampled = false;
  int bow_core = 3, bow_random = 20000;
  CLI::App* bow = app.add_subcommand("bowditch", "lines-and-centers constants (I)/(II)/(III)");
  bow_c.attach(bow);
  bow->add_option("--kappa0", bow_kappa, "line thickness (>= mu0)");
  bow->add_option("--mu0", bow_mu, "saturation radius");
  bow->add_flag("--sampled", bow_sampled, "sampled triple scan (core + random)");
  bow->add_option("--core", bow_core, "sampled mode: exhaustive core radius");
  bow->add_option("--random-triples", bow_random, "sampled mode: random triples");

  std::string tg_in, tg_out;
  int tg_cap = 12;
  bool tg_canonical = false;
  CLI::App* tg = app.add_subcommand("treegraded", "check (T1)/(T2) on a piece space");
  tg->add_option("--in", tg_in, "PieceSpace JSON")->required();
  tg->add_option("--out", tg_out, "artifact path (default stdout)");
  tg->add_option("--cycle-cap", tg_cap, "simple-cycle length cap for (T2)");
  tg->add_flag("--canonical", tg_canonical,
               "ignore declared pieces; use the block decomposition");

  std::string sn_dims = "2", sn_stages = "2..4", sn_out;
  int sn_grid = 16;
  double sn_zeta = 0.5;
  std::uint64_t sn_seed = 1;
  CLI::App* snet = app.add_subcommand("snet", "nested snets + net metric bounds on tori");
  snet->add_option("--dims", sn_dims, "bouquet torus dimensions, comma separated");
  snet->add_option("--grid", sn_grid, "grid resolution per coordinate");
  snet->add_option("--zeta", sn_zeta, "scale factor in (0,1)");
  snet->add_option("--stages", sn_stages, "stage numbers A..B");
  snet->add_option("--seed", sn_seed, "seed, recorded in the artifact");
  snet->add_option("--out", sn_out, "artifact path (default stdout)");

  std::string eo_config, eo_out_pres, eo_out_diag;
  CLI::App* eo = app.add_subcommand("eo-build", "run the two-generator construction pipeline");
  eo->add_option("--config", eo_config, "EOConfig JSON file")->required();
  eo->add_option("--out-presentation", eo_out_pres, "presentation artifact (default stdout)");
  eo->add_option("--out-diagnostics", eo_out_diag, "diagnostics JSON artifact");

  std::string sc_mode = "cprime", sc_rel, sc_words, sc_word, sc_lambda = "1/6", sc_out;
  std::string sc_lengths = "8..12";
  int sc_per = 3;
  std::uint64_t sc_seed = 1;
  CLI::App* sc = app.add_subcommand("smallcancel", "piece/C* checkers, generation, Dehn");
  sc->add_option("--mode", sc_mode, "cprime|cstar|profile|generate|dehn")
      ->check(CLI::IsMember({"cprime", "cstar", "profile", "generate", "dehn"}));
  sc->add_option("--rel", sc_rel, "presentation file (relators + alphabet)");
  sc->add_option("--words", sc_words, "word set file, one word per line over a,b");
  sc->add_option("--word", sc_word, "single word (dehn mode)");
  sc->add_option("--lambda", sc_lambda, "rational threshold");
  sc->add_option("--lengths", sc_lengths, "generation lengths A..B");
  sc->add_option("--per-length", sc_per, "orbits per length");
  sc->add_option("--seed", sc_seed, "generation seed");
  sc->add_option("--out", sc_out, "artifact path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ball) return cmd_ball(ball_c, false);
    if (*relball) return cmd_ball(relball_c, true);

    if (*alpha) {
      auto oracle = load_group(alpha_c.group);
      RadiusRange rr = parse_range(alpha_c.range);
      std::vector<AlphaReport> rows;
      for (int r = rr.lo; r <= rr.hi; ++r) {
        RelBallGraph rel = alpha_c.rel_ball(*oracle, r);
        if (alpha_which == 1)
          rows.push_back(alpha1_report(rel, parse_rat(alpha_delta)));
        else if (alpha_which == 2)
          rows.push_back(alpha2_report(rel, parse_rat(alpha_theta)));
        else
          rows.push_back(alpha3_report(
              rel, FatParams(parse_rat(fat_theta), parse_rat(fat_sigma), parse_rat(fat_nu)),
              alpha_k, alpha_samples, alpha_c.seed));
      }
      std::string headline = alpha_which == 1 ? "diameter" : alpha_which == 2 ? "M" : "chi";
      return alpha_c.finish(merge_reports(rows), headline);
    }

    if (*bcp) {
      auto oracle = load_group(bcp_c.group);
      RadiusRange rr = parse_range(bcp_c.range);
      std::vector<AlphaReport> rows;
      for (int r = rr.lo; r <= rr.hi; ++r)
        rows.push_back(bcp_report(bcp_c.rel_ball(*oracle, r), parse_rat(bcp_lambda), bcp_cap));
      return bcp_c.finish(merge_reports(rows), "a2");
    }

    if (*morse) {
      auto oracle = load_group(morse_c.group);
      RadiusRange rr = parse_range(morse_c.range);
      SatParams sp;
      sp.L = parse_rat(morse_L);
      sp.C = parse_rat(morse_C);
      sp.M = parse_rat(morse_M);
      sp.mu = sp.M;
      std::vector<AlphaReport> rows;
      for (int r = rr.lo; r <= rr.hi; ++r) {
        RelBallGraph rel = morse_c.rel_ball(*oracle, r);
        std::mt19937_64 rng(morse_c.seed);
        AlphaReport::Entry agg;
        agg.r = r;
        int used = 0;
        for (int s = 0; s < morse_samples; ++s) {
          int u = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(rel.size())));
          int v = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(rel.size())));
          if (u == v) continue;
          auto q = sample_quasigeodesic(rel.ball, u, v, sp.L, sp.C, morse_c.seed + s);
          if (!q) continue;
          std::vector<int> g = chosen_geodesic(rel.ball, u, v);
          RelPath p = rel_path_from_vertices(rel, chosen_rel_geodesic(rel, u, v));
          AlphaReport one = morse_report(rel, g, *q, p, sp);
          for (const auto& [k, val] : one.per_radius[0].measured) {
            auto it = agg.measured.find(k);
            if (it == agg.measured.end() || val > it->second) agg.measured[k] = val;
          }
          ++used;
        }
        agg.measured["samples_used"] = used;
        AlphaReport rep;
        rep.condition = "morse";
        rep.params["L"] = sp.L.str();
        rep.params["C"] = sp.C.str();
        rep.params["M"] = sp.M.str();
        rep.per_radius.push_back(std::move(agg));
        rows.push_back(std::move(rep));
      }
      return morse_c.finish(merge_reports(rows), "tau1");
    }

    if (*bow) {
      auto oracle = load_group(bow_c.group);
      RadiusRange rr = parse_range(bow_c.range);
      nlohmann::json out = nlohmann::json::array();
      bool fail = false;
      for (int r = rr.lo; r <= rr.hi; ++r) {
        RelBallGraph rel = bow_c.rel_ball(*oracle, r);
        LineSystem ls = build_lines_centers(rel, parse_rat(bow_kappa), parse_rat(bow_mu));
        ScanPolicy policy = bow_sampled
                                ? ScanPolicy::Sampled(bow_core, bow_random, bow_c.seed)
                                : ScanPolicy::Exhaustive();
        BowditchReport rep = bowditch_K(rel, ls, policy);
        if (bow_c.bound >= 0 && rep.K > bow_c.bound) fail = true;
        out.push_back(
            nlohmann::json::parse(rep.to_json(parse_rat(bow_kappa), parse_rat(bow_mu))));
      }
      nlohmann::json wrap;
      wrap["condition"] = "bowditch";
      wrap["group"] = bow_c.group;
      wrap["seed"] = bow_c.seed;
      wrap["per_radius"] = out;
      if (bow_c.bound >= 0) wrap["verdict"] = fail ? "fail" : "pass";
      emit(bow_c.out, wrap.dump(2));
      return fail ? 1 : 0;
    }

    if (*tg) {
      PieceSpace x = tg_canonical
                         ? canonical_pieces(PieceSpace::from_json(slurp(tg_in)).graph())
                         : PieceSpace::from_json(slurp(tg_in));
      T1Result t1 = check_t1(x);
      T2Result t2 = check_t2(x, tg_cap);
      nlohmann::json j;
      j["t1"] = t1.ok;
      if (!t1.ok)
        j["t1_witness"] = {{"piece_a", t1.piece_a},
                           {"piece_b", t1.piece_b},
                           {"intersection", t1.intersection}};
      j["t2"] = t2.ok;
      j["t2_cycle_cap"] = t2.cycle_cap;
      if (!t2.ok) j["t2_witness"] = t2.offending_cycle;
      j["pieces"] = x.pieces().size();
      if (tg_canonical) j["decomposition"] = nlohmann::json::parse(x.to_json());
      emit(tg_out, j.dump(2));
      return (t1.ok && t2.ok) ? 0 : 1;
    }

    if (*snet) {
      std::vector<int> dims;
      std::stringstream ss(sn_dims);
      std::string tok;
      while (std::getline(ss, tok, ',')) dims.push_back(std::stoi(tok));
      RadiusRange st = parse_range(sn_stages);
      auto space = torus_bouquet_space(dims, sn_grid);
      std::vector<double> radii, deltas;
      std::vector<int> numbers;
      for (int n = st.lo; n <= st.hi; ++n) {
        radii.push_back(n);
        deltas.push_back(std::pow(sn_zeta, n));
        numbers.push_back(n);
      }
      SnetChain chain = nested_snets(*space, radii, deltas, sn_zeta, {}, numbers);
      NetBoundsReport rep = net_metric_bounds_check(chain, sn_zeta);
      nlohmann::json j;
      j["condition"] = "net-bounds";
      j["zeta"] = sn_zeta;
      j["grid"] = sn_grid;
      j["seed"] = sn_seed;
      j["stages"] = nlohmann::json::array();
      for (int s = 0; s < chain.stages(); ++s)
        j["stages"].push_back({{"n", chain.stage_numbers[s]},
                               {"net", chain.nets[s].size()},
                               {"edges", chain.gammas[s].edge_count()},
                               {"kappa", chain.gammas[s].kappa},
                               {"connected", chain.gammas[s].connected}});
      j["pairs_checked"] = rep.pairs_checked;
      j["ok"] = rep.ok;
      j["max_rel_slack"] = format_double(rep.max_rel_slack);
      if (!rep.ok) {
        auto& v = j["violations"] = nlohmann::json::array();
        for (const auto& viol : rep.violations)
          v.push_back({{"stage", viol.stage},
                       {"x", space->point_label(viol.x)},
                       {"y", space->point_label(viol.y)},
                       {"dist", viol.dist},
                       {"dist_n", viol.dist_n},
                       {"upper", viol.upper}});
      }
      emit(sn_out, j.dump(2));
      return rep.ok ? 0 : 1;
    }

    if (*eo) {
      EOConfig cfg = EOConfig::from_json(slurp(eo_config));
      EOBuildResult res = build_eo_presentation(cfg);
      emit(eo_out_pres, print_presentation(res.presentation) + "\n");
      if (!eo_out_diag.empty()) {
        nlohmann::json j;
        j["condition"] = "eo-build";
        j["seed"] = cfg.seed;
        j["config"] = nlohmann::json::parse(cfg.to_json());
        j["relators"] = res.presentation.relators.size();
        j["cprime_lambda_measured"] = format_double(res.cprime_lambda_measured);
        j["fast_seq_certificate"] = res.fast_seq_certificate;
        auto& st = j["stages"] = nlohmann::json::array();
        for (const auto& s : res.stages) {
          nlohmann::json row;
          row["stage"] = s.stage;
          row["space"] = s.space_index;
          row["net"] = s.net_size;
          row["edges"] = s.edge_count;
          row["d_n"] = s.d_n;
          row["relators"] = s.relators;
          auto& audit = row["length_audit"] = nlohmann::json::array();
          for (auto [target, actual] : s.length_audit)
            audit.push_back({{"target", target}, {"actual", actual}});
          st.push_back(std::move(row));
        }
        emit(eo_out_diag, j.dump(2));
      }
      return 0;
    }

    if (*sc) {
      std::vector<std::string> ab{"a", "b"};
      if (sc_mode == "cprime") {
        Presentation p = parse_presentation(slurp(sc_rel));
        CPrimeResult res = check_c_prime(WordSet(p.relators), parse_rat(sc_lambda));
        nlohmann::json j;
        j["condition"] = "cprime";
        j["lambda"] = parse_rat(sc_lambda).str();
        j["ok"] = res.ok;
        j["lambda_measured"] = format_double(res.report.lambda_measured);
        if (res.report.worst)
          j["witness"] = {{"relator_a", res.report.worst->relator_a},
                          {"relator_b", res.report.worst->relator_b},
                          {"piece_len", res.report.worst->piece_len}};
        emit(sc_out, j.dump(2));
        return res.ok ? 0 : 1;
      }
      if (sc_mode == "cstar" || sc_mode == "profile") {
        WordSet ws = close_word_set(word_set_from_text(slurp(sc_words), ab));
        if (sc_mode == "profile") {
          emit(sc_out, cstar_profile(ws).to_csv());
          return 0;
        }
        CStarResult res = check_cstar(ws, parse_rat(sc_lambda));
        nlohmann::json j;
        j["condition"] = "cstar";
        j["lambda"] = parse_rat(sc_lambda).str();
        j["ok"] = res.ok;
        if (res.witness)
          j["witness"] = {{"subword", word_to_string(res.witness->subword, ab)},
                          {"host_a", word_to_string(res.witness->host_a, ab)},
                          {"host_b", word_to_string(res.witness->host_b, ab)},
                          {"which", res.witness->condition}};
        emit(sc_out, j.dump(2));
        return res.ok ? 0 : 1;
      }
      if (sc_mode == "generate") {
        RadiusRange lr = parse_range(sc_lengths);
        std::vector<int> lengths;
        for (int l = lr.lo; l <= lr.hi; ++l) lengths.push_back(l);
        GenerateResult res =
            generate_cstar_words(parse_rat(sc_lambda), lengths, sc_per, sc_seed);
        std::ostringstream os;
        os << "# relgeo smallcancel generate lambda=" << parse_rat(sc_lambda).str()
           << " lengths=" << sc_lengths << " per=" << sc_per << " seed=" << sc_seed << '\n';
        os << word_set_to_text(res.words, ab);
        emit(sc_out, os.str());
        if (!res.complete()) {
          for (const auto& s : res.shortfalls)
            std::cerr << "shortfall: length " << s.length << " got " << s.obtained << "/"
                      << s.requested << '\n';
          return 1;
        }
        return 0;
      }
      // dehn
      Presentation p = parse_presentation(slurp(sc_rel));
      DehnReducer dehn{WordSet(p.relators)};
      Word w = parse_word(sc_word, p.generator_names);
      Word r = dehn.reduce(w);
      nlohmann::json j;
      j["condition"] = "dehn";
      j["input"] = word_to_string(w, p.generator_names);
      j["reduced"] = word_to_string(r, p.generator_names);
      j["trivial"] = r.empty();
      emit(sc_out, j.dump(2));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

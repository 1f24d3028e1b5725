#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kelly/divergence.hpp"
#include "kelly/dominance.hpp"
#include "kelly/errors.hpp"
#include "kelly/gambling.hpp"
#include "kelly/io.hpp"
#include "kelly/market.hpp"
#include "kelly/minimax.hpp"
#include "kelly/solver.hpp"
#include "kelly/sufficiency.hpp"

namespace {

using kelly::format_double;
using ordered_json = nlohmann::ordered_json;

struct Options {
  std::string market_path;
  std::string dist;
  bool uniform = false;
  std::string sequence;
  std::string q;
  std::string family;
  std::string constraints;
  std::vector<std::string> portfolios;
  std::uint64_t seed = 0;
  std::size_t samples = 200;
  std::string format = "text";
  std::optional<double> tol;
};

// infinities as strings, everything else as plain numbers
ordered_json jnum(double v) {
  if (std::isinf(v)) return ordered_json(v > 0 ? "inf" : "-inf");
  return ordered_json(v);
}

ordered_json jvec(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(jnum(x));
  return a;
}

ordered_json jnames(const std::vector<std::string>& v) {
  ordered_json a = ordered_json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

std::string scalar_text(const ordered_json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return format_double(v.get<double>());
  if (v.is_null()) return "none";
  return v.dump();
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

// json: the flat object; text/csv: key/value lines, or the table if present
void emit(const ordered_json& j, const std::optional<Table>& table,
          const std::string& format) {
  if (format == "json") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  if (table) {
    for (std::size_t i = 0; i < table->header.size(); ++i)
      std::cout << (i ? "," : "") << table->header[i];
    std::cout << '\n';
    for (const auto& row : table->rows) {
      for (std::size_t i = 0; i < row.size(); ++i) std::cout << (i ? "," : "") << row[i];
      std::cout << '\n';
    }
    return;
  }
  const bool csv = format == "csv";
  for (const auto& [key, value] : j.items()) {
    if (value.is_array()) {
      if (csv) {
        for (std::size_t i = 0; i < value.size(); ++i)
          std::cout << key << ',' << i << ',' << scalar_text(value[i]) << '\n';
      } else {
        std::cout << key << ": ";
        for (std::size_t i = 0; i < value.size(); ++i)
          std::cout << (i ? ", " : "") << scalar_text(value[i]);
        std::cout << '\n';
      }
    } else {
      std::cout << key << (csv ? "," : ": ") << scalar_text(value) << '\n';
    }
  }
}

kelly::Distribution resolve_distribution(const kelly::MarketFile& mf, const Options& opt) {
  int sources = (opt.dist.empty() ? 0 : 1) + (opt.uniform ? 1 : 0) +
                (opt.sequence.empty() ? 0 : 1) + (mf.probs ? 1 : 0);
  if (sources > 1)
    throw kelly::ParseError("<args>", 0,
                            "multiple distribution sources (use exactly one of --dist, "
                            "--uniform, --sequence, or a prob column)");
  const std::size_t m = mf.market.num_outcomes();
  if (!opt.dist.empty()) return kelly::load_distribution(opt.dist, m);
  if (opt.uniform)
    return kelly::Distribution(std::vector<double>(m, 1.0 / static_cast<double>(m)));
  if (!opt.sequence.empty())
    return kelly::empirical_distribution(kelly::load_outcome_sequence(opt.sequence, mf.market),
                                         m);
  if (mf.probs) return *mf.probs;
  throw kelly::ParseError(
      "<args>", 0, "no distribution source (--dist, --uniform, --sequence, or prob column)");
}

kelly::Portfolio parse_portfolio(const std::string& spec, std::size_t k, std::string& label) {
  auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0)
    throw kelly::ParseError("<args>", 0, "portfolio must be label=w1,w2,... got '" + spec + "'");
  label = spec.substr(0, eq);
  std::vector<double> w;
  std::string tok;
  auto flush = [&] {
    if (tok.empty()) return;
    w.push_back(std::stod(tok));
    tok.clear();
  };
  try {
    for (std::size_t i = eq + 1; i < spec.size(); ++i) {
      if (spec[i] == ',')
        flush();
      else
        tok.push_back(spec[i]);
    }
    flush();
  } catch (const std::exception&) {
    throw kelly::ParseError("<args>", 0, "bad portfolio weights in '" + spec + "'");
  }
  if (w.size() != k)
    throw kelly::ParseError("<args>", 0, "portfolio '" + label + "' needs " +
                                             std::to_string(k) + " weights");
  double sum = 0.0;
  for (double x : w) {
    if (x < 0.0) throw kelly::ParseError("<args>", 0, "negative weight in '" + label + "'");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw kelly::ParseError("<args>", 0,
                            "weights of '" + label + "' sum to " + format_double(sum));
  for (double& x : w) x /= sum;
  return kelly::Portfolio(w);
}

std::string uniqueness_text(kelly::Uniqueness u) {
  switch (u) {
    case kelly::Uniqueness::Unique: return "yes";
    case kelly::Uniqueness::NonUnique: return "no";
    default: return "unknown";
  }
}

void cmd_solve(const Options& opt) {
  kelly::MarketFile mf = kelly::load_market_csv(opt.market_path);
  kelly::Distribution p = resolve_distribution(mf, opt);
  kelly::SolverOptions sopt;
  if (opt.tol) sopt.kkt_tol = *opt.tol;
  kelly::SolveReport rep =
      opt.constraints.empty()
          ? kelly::solve(mf.market, p, sopt)
          : kelly::solve(mf.market, p,
                         kelly::load_constraints_csv(opt.constraints,
                                                     mf.market.num_assets()),
                         sopt);
  ordered_json j;
  j["assets"] = jnames(mf.market.asset_names());
  j["weights"] = jvec(rep.portfolio.weights());
  j["growth_nats"] = jnum(rep.growth.nats());
  j["doubling_rate_bits"] = jnum(rep.growth.bits());
  j["kkt_residual"] = jnum(rep.kkt_residual);
  j["iterations"] = static_cast<std::uint64_t>(rep.iterations);
  j["unique"] = uniqueness_text(rep.unique);
  emit(j, std::nullopt, opt.format);
}

void cmd_regret(const Options& opt) {
  kelly::MarketFile mf = kelly::load_market_csv(opt.market_path);
  kelly::Distribution p = resolve_distribution(mf, opt);
  if (opt.q.empty()) throw kelly::ParseError("<args>", 0, "regret needs --q");
  kelly::Distribution q = kelly::load_distribution(opt.q, mf.market.num_outcomes());

  kelly::Regret r = kelly::distribution_regret(mf.market, p, q);
  double d = kelly::kl_divergence(p, q);
  double gap = kelly::cover_gap(mf.market, p, q);
  const double ln2 = std::log(2.0);

  ordered_json j;
  j["regret_nats"] = jnum(r.value());
  j["regret_bits"] = jnum(r.value() / ln2);
  j["divergence_nats"] = jnum(d);
  j["divergence_bits"] = jnum(d / ln2);
  j["cover_gap_nats"] = jnum(gap);
  j["cover_gap_bits"] = jnum(gap / ln2);
  emit(j, std::nullopt, opt.format);
}

void cmd_dominance(const Options& opt) {
  kelly::MarketFile mf = kelly::load_market_csv(opt.market_path);
  const kelly::Market& market = mf.market;
  const std::size_t k = market.num_assets();

  std::vector<kelly::Portfolio> basis;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> e(k, 0.0);
    e[i] = 1.0;
    basis.emplace_back(e);
  }
  // matrix[a][b]: S = a strictly dominates b, W = weakly only, . = neither
  std::vector<std::string> matrix(k, std::string(k, '.'));
  for (std::size_t a = 0; a < k; ++a) {
    matrix[a][a] = '=';
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      if (kelly::strictly_dominates(market, basis[a], basis[b]))
        matrix[a][b] = 'S';
      else if (kelly::dominates(market, basis[a], basis[b]))
        matrix[a][b] = 'W';
    }
  }
  kelly::PruneResult pr = kelly::prune(market);

  ordered_json j;
  j["assets"] = jnames(market.asset_names());
  ordered_json rows = ordered_json::array();
  for (const auto& row : matrix) rows.push_back(row);
  j["matrix"] = rows;
  ordered_json removed = ordered_json::array();
  for (std::size_t i : pr.removed) removed.push_back(market.asset_names()[i]);
  j["strictly_dominated"] = removed;
  ordered_json weak = ordered_json::array();
  for (std::size_t i : pr.weakly_dominated) weak.push_back(market.asset_names()[i]);
  j["weakly_dominated"] = weak;
  emit(j, std::nullopt, opt.format);
}

void cmd_prune(const Options& opt) {
  kelly::MarketFile mf = kelly::load_market_csv(opt.market_path);
  kelly::PruneResult pr = kelly::prune(mf.market);
  if (opt.format == "csv" || opt.format == "text") {
    // the pruned market itself, ready to feed back in
    std::cout << kelly::format_market_csv(pr.market,
                                          mf.probs ? &*mf.probs : nullptr);
    return;
  }
  ordered_json j;
  j["assets"] = jnames(pr.market.asset_names());
  ordered_json removed = ordered_json::array();
  for (std::size_t i : pr.removed) removed.push_back(mf.market.asset_names()[i]);
  j["removed"] = removed;
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < pr.market.num_outcomes(); ++r) {
    ordered_json row = ordered_json::array();
    for (std::size_t i = 0; i < pr.market.num_assets(); ++i)
      row.push_back(jnum(pr.market.at(r, i)));
    rows.push_back(row);
  }
  j["rows"] = rows;
  j["outcomes"] = jnames(pr.market.outcome_names());
  emit(j, std::nullopt, opt.format);
}

void cmd_embed(const Options& opt) {
  kelly::MarketFile mf = kelly::load_market_csv(opt.market_path);
  kelly::Embedding emb = kelly::embed_ideal(mf.market);
  ordered_json j;
  j["outcomes"] = jnames(mf.market.outcome_names());
  j["odds"] = jvec(emb.odds.payouts());
  j["assets"] = jnames(mf.market.asset_names());
  ordered_json w = ordered_json::array();
  for (const auto& p : emb.weights) w.push_back(jvec(p.weights()));
  j["weights"] = w;
  if (opt.format == "json") {
    emit(j, std::nullopt, opt.format);
    return;
  }
  Table t;
  t.header = {"asset", "outcome", "odds", "weight"};
  for (std::size_t i = 0; i < emb.weights.size(); ++i)
    for (std::size_t r = 0; r < emb.odds.size(); ++r)
      t.rows.push_back({mf.market.asset_names()[i], mf.market.outcome_names()[r],
                        format_double(emb.odds[r]), format_double(emb.weights[i][r])});
  emit(j, t, opt.format);
}

void cmd_fairness(const Options& opt) {
  kelly::MarketFile mf = kelly::load_market_csv(opt.market_path);
  kelly::Embedding emb = kelly::embed_ideal(mf.market);
  kelly::FairnessReport fr = kelly::classify_fairness(emb.odds);
  auto db = kelly::dutch_book(emb.odds);

  ordered_json j;
  j["odds"] = jvec(emb.odds.payouts());
  j["inverse_sum"] = jnum(fr.inverse_sum);
  j["class"] = fr.kind == kelly::FairnessClass::Fair        ? "fair"
               : fr.kind == kelly::FairnessClass::Superfair ? "superfair"
                                                            : "subfair";
  if (db) {
    j["dutch_book"] = jvec(db->portfolio.weights());
    j["dutch_book_guarantee"] = jnum(db->guarantee);
  }
  emit(j, std::nullopt, opt.format);
}

void cmd_minimax(const Options& opt) {
  kelly::MarketFile mf = kelly::load_market_csv(opt.market_path);
  if (opt.family.empty()) throw kelly::ParseError("<args>", 0, "minimax needs --family");
  std::vector<kelly::Distribution> family =
      kelly::load_family_csv(opt.family, mf.market.num_outcomes());
  kelly::MinimaxOptions mopt;
  if (opt.tol) mopt.gap_tol = *opt.tol;
  kelly::MinimaxReport rep = kelly::minimax_regret(mf.market, family, mopt);

  ordered_json j;
  j["value_nats"] = jnum(rep.value);
  j["value_bits"] = jnum(rep.value / std::log(2.0));
  j["assets"] = jnames(mf.market.asset_names());
  j["robust_portfolio"] = jvec(rep.robust_portfolio.weights());
  j["worst_mixture"] = jvec(rep.worst_mixture);
  j["barycenter"] = jvec(rep.barycenter.probs());
  j["duality_gap"] = jnum(rep.duality_gap);
  j["rounds"] = static_cast<std::uint64_t>(rep.rounds);
  emit(j, std::nullopt, opt.format);
}

void cmd_sufficiency(const Options& opt) {
  kelly::MarketFile mf = kelly::load_market_csv(opt.market_path);
  kelly::RowDedup dd = kelly::deduplicate_rows(mf.market);
  bool merged = dd.market.num_outcomes() != mf.market.num_outcomes();
  kelly::CrosscheckReport rep =
      kelly::characterization_crosscheck(dd.market, opt.seed, opt.samples);

  ordered_json j;
  j["verdict"] = rep.verdict.outcome == kelly::ProportionalityOutcome::Proportional
                     ? "proportional"
                 : rep.verdict.outcome == kelly::ProportionalityOutcome::NotProportional
                     ? "not-proportional"
                     : "degenerate";
  if (rep.verdict.constant_c) j["constant"] = jnum(*rep.verdict.constant_c);
  if (rep.verdict.counterexample) {
    j["counterexample_p"] = jvec(rep.verdict.counterexample->p.probs());
    j["counterexample_q"] = jvec(rep.verdict.counterexample->q.probs());
    j["counterexample_regret"] = jnum(rep.verdict.counterexample->regret);
    j["counterexample_predicted"] = jnum(rep.verdict.counterexample->predicted);
  }
  j["samples_tested"] = static_cast<std::uint64_t>(rep.verdict.samples_tested);
  j["is_kelly_market"] = rep.kelly.has_value();
  if (rep.kelly) j["odds"] = jvec(rep.kelly->payouts());
  j["agree"] = rep.agree;
  if (merged) j["note"] = "duplicate outcome rows merged before testing";
  emit(j, std::nullopt, opt.format);
}

void cmd_simulate(const Options& opt) {
  kelly::MarketFile mf = kelly::load_market_csv(opt.market_path);
  if (opt.sequence.empty()) throw kelly::ParseError("<args>", 0, "simulate needs --sequence");
  std::vector<std::size_t> seq = kelly::load_outcome_sequence(opt.sequence, mf.market);
  if (opt.portfolios.empty())
    throw kelly::ParseError("<args>", 0, "simulate needs at least one --portfolio");

  ordered_json step = ordered_json::array();
  ordered_json label_col = ordered_json::array();
  ordered_json wealth_col = ordered_json::array();
  Table t;
  t.header = {"step", "portfolio", "wealth"};
  for (const std::string& spec : opt.portfolios) {
    std::string label;
    kelly::Portfolio b = parse_portfolio(spec, mf.market.num_assets(), label);
    std::vector<double> wealth = kelly::wealth_trajectory(mf.market, b, seq);
    for (std::size_t s = 0; s < wealth.size(); ++s) {
      step.push_back(static_cast<std::uint64_t>(s + 1));
      label_col.push_back(label);
      wealth_col.push_back(jnum(wealth[s]));
      t.rows.push_back({std::to_string(s + 1), label, format_double(wealth[s])});
    }
  }
  ordered_json j;
  j["step"] = step;
  j["portfolio"] = label_col;
  j["wealth"] = wealth_col;
  emit(j, t, opt.format);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"log-optimal portfolio analysis"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&](CLI::App* sub, bool needs_dist) {
    sub->add_option("--market", opt.market_path, "market CSV file")->required();
    if (needs_dist) {
      sub->add_option("--dist", opt.dist, "distribution file or inline list");
      sub->add_flag("--uniform", opt.uniform, "uniform distribution over outcomes");
      sub->add_option("--sequence", opt.sequence, "outcome sequence file (empirical)");
    }
    sub->add_option("--seed", opt.seed, "random seed")->capture_default_str();
    sub->add_option("--format", opt.format, "json, csv or text")
        ->capture_default_str()
        ->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--tol", opt.tol, "tolerance override");
    return sub;
  };

  CLI::App* solve = add_common(app.add_subcommand("solve", "log-optimal portfolio"), true);
  solve->add_option("--constraints", opt.constraints, "constraint CSV file");

  CLI::App* regret =
      add_common(app.add_subcommand("regret", "regret and divergence of p against q"), true);
  regret->add_option("--q", opt.q, "reference distribution (file or inline)");

  add_common(app.add_subcommand("dominance", "dominance relations among assets"), false);
  add_common(app.add_subcommand("prune", "remove strictly dominated assets"), false);
  add_common(app.add_subcommand("embed", "represent assets as ideal gambles"), false);
  add_common(app.add_subcommand("fairness", "odds fairness and Dutch book"), false);

  CLI::App* minimax =
      add_common(app.add_subcommand("minimax", "minimax regret over a family"), false);
  minimax->add_option("--family", opt.family, "family CSV file, one distribution per row");

  CLI::App* sufficiency = add_common(
      app.add_subcommand("sufficiency", "test regret/divergence proportionality"), false);
  sufficiency->add_option("--samples", opt.samples, "sample count")->capture_default_str();

  CLI::App* simulate =
      add_common(app.add_subcommand("simulate", "wealth trajectories on a sequence"), false);
  simulate->add_option("--sequence", opt.sequence, "outcome sequence file")->required();
  simulate->add_option("--portfolio", opt.portfolios,
                       "portfolio as label=w1,w2,... (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("solve")) cmd_solve(opt);
    else if (app.got_subcommand("regret")) cmd_regret(opt);
    else if (app.got_subcommand("dominance")) cmd_dominance(opt);
    else if (app.got_subcommand("prune")) cmd_prune(opt);
    else if (app.got_subcommand("embed")) cmd_embed(opt);
    else if (app.got_subcommand("fairness")) cmd_fairness(opt);
    else if (app.got_subcommand("minimax")) cmd_minimax(opt);
    else if (app.got_subcommand("sufficiency")) cmd_sufficiency(opt);
    else if (app.got_subcommand("simulate")) cmd_simulate(opt);
  } catch (const kelly::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const kelly::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

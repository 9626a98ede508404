#include "oilsent/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "oilsent/backtest.hpp"
#include "oilsent/completion.hpp"
#include "oilsent/corpus.hpp"
#include "oilsent/csv.hpp"
#include "oilsent/error.hpp"
#include "oilsent/fixtures.hpp"
#include "oilsent/labels.hpp"
#include "oilsent/lexicon.hpp"
#include "oilsent/prompt.hpp"
#include "oilsent/report_io.hpp"
#include "oilsent/silver.hpp"

namespace oilsent::cli {
namespace fs = std::filesystem;

namespace {

class UsageError : public ValidationError {
public:
  using ValidationError::ValidationError;
};

// ---------------------------------------------------------------------------
// Output helpers

void write_text(const fs::path& p, const RunConfig& cfg, const std::string& body) {
  write_file_atomic(p, cfg.comment_line() + body);
}

void write_csv(const fs::path& p, const RunConfig& cfg,
               const std::function<void(std::ostream&)>& body) {
  std::ostringstream s;
  body(s);
  write_text(p, cfg, s.str());
}

void write_json(const fs::path& p, const RunConfig& cfg, nlohmann::json j) {
  j["run_config"] = cfg.to_json();
  write_file_atomic(p, j.dump(2) + "\n");
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw IoError("cannot create output directory '" + dir + "': " + ec.message());
  return p;
}

// ---------------------------------------------------------------------------
// Shared option groups

struct CorpusOpts {
  std::string headlines;
  std::string headline_format = "csv";
  std::string prices;
  std::string price_format = "csv";
  std::string start, end;
  std::string weekend = "next-day";
  bool allow_negative = false;

  void add(CLI::App* app, bool need_prices) {
    app->add_option("--headlines", headlines, "Headline file");
    app->add_option("--headline-format", headline_format, "csv or jsonl")
        ->check(CLI::IsMember({"csv", "jsonl"}));
    auto* p = app->add_option("--prices", prices, "Daily close file");
    if (need_prices) p->required();
    app->add_option("--price-format", price_format, "csv or vendor")
        ->check(CLI::IsMember({"csv", "vendor"}));
    app->add_option("--start", start, "First date (YYYY-MM-DD), default first price");
    app->add_option("--end", end, "Last date (YYYY-MM-DD), default last price");
    app->add_option("--weekend-policy", weekend, "Headlines on non-trading days")
        ->check(CLI::IsMember({"next-day", "drop"}));
    app->add_flag("--allow-negative-prices", allow_negative, "Admit negative closes");
  }

  std::vector<Headline> load_headline_file() const {
    if (headlines.empty()) return {};
    return load_headlines(headlines, headline_format == "jsonl" ? HeadlineFormat::CanonicalJsonl
                                                                : HeadlineFormat::CanonicalCsv);
  }

  AlignedCorpus build(RunConfig& cfg) const {
    const auto hs = load_headline_file();
    const auto ps = load_prices(prices,
                                price_format == "vendor" ? PriceFormat::VendorCsv
                                                         : PriceFormat::CanonicalCsv,
                                PriceLoadOptions{allow_negative});
    if (ps.empty()) throw EmptyInputError("price file has no rows");
    const Date s = start.empty() ? ps.front().date : parse_iso_date(start);
    const Date e = end.empty() ? ps.back().date : parse_iso_date(end);
    cfg.start = format_date(s);
    cfg.end = format_date(e);
    cfg.weekend_policy = weekend;
    cfg.inputs["prices"] = prices;
    if (!headlines.empty()) cfg.inputs["headlines"] = headlines;
    cfg.extra["allow_negative_prices"] = allow_negative;
    return align(hs, ps, s, e, weekend == "drop" ? WeekendPolicy::Drop : WeekendPolicy::NextDay);
  }
};

struct SignalOpts {
  std::size_t window = kDefaultWindow;
  double theta = 0.1;
  std::string aggregation = "mean";
  std::string discretize = "auto";
  std::string neutral = "down";

  void add(CLI::App* app) {
    app->add_option("--window", window, "Rolling window in observations")
        ->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
    app->add_option("--theta", theta, "Neutral band half-width")
        ->check(CLI::Range(0.0, 1e300));
    app->add_option("--aggregation", aggregation, "Daily aggregation")
        ->check(CLI::IsMember({"mean", "median", "sum"}));
    app->add_option("--discretize", discretize, "Discretize raw or normalized scores")
        ->check(CLI::IsMember({"auto", "raw", "normalized"}));
    app->add_option("--neutral-policy", neutral, "Binary call for neutral days")
        ->check(CLI::IsMember({"down", "up", "exclude", "hold"}));
  }

  SignalOptions options(RunConfig& cfg) const {
    cfg.window = window;
    cfg.theta = theta;
    cfg.aggregation = aggregation;
    cfg.discretize = discretize;
    cfg.neutral_policy = neutral;
    SignalOptions o;
    o.window = window;
    o.bands.theta = theta;
    o.aggregation = aggregation == "median" ? Aggregation::Median
                    : aggregation == "sum"  ? Aggregation::Sum
                                            : Aggregation::Mean;
    o.mode = discretize == "raw"          ? DiscretizeMode::Raw
             : discretize == "normalized" ? DiscretizeMode::Normalized
                                          : DiscretizeMode::Auto;
    o.neutral = neutral == "up"        ? NeutralPolicy::Up
                : neutral == "exclude" ? NeutralPolicy::Exclude
                : neutral == "hold"    ? NeutralPolicy::Hold
                                       : NeutralPolicy::Down;
    return o;
  }
};

Lexicon pick_lexicon(const std::string& path, RunConfig& cfg) {
  if (path.empty()) {
    cfg.inputs["lexicon"] = "(default)";
    return default_lexicon();
  }
  cfg.inputs["lexicon"] = path;
  return load_lexicon(path);
}

ScoreFile silver_scores(const AlignedCorpus& corpus, const Lexicon& lex) {
  ScoreFile sf;
  sf.kind = ScoreFile::Kind::ById;
  const auto ds = build_silver_dataset(corpus.headlines(), lex);
  for (const auto& e : ds.labeled) sf.by_id.emplace_back(e.headline.id, double(e.label.cls));
  return sf;
}

void report_warnings(std::ostream& err, const std::string& who,
                     const std::vector<std::string>& warnings) {
  if (warnings.empty()) return;
  err << who << ": " << warnings.size() << " warning(s)";
  for (std::size_t i = 0; i < warnings.size() && i < 5; ++i) err << "\n  " << warnings[i];
  if (warnings.size() > 5) err << "\n  ...";
  err << "\n";
}

std::string gnuplot_script(const std::string& data, const std::string& title, int ycol) {
  return "set datafile separator ','\nset key autotitle columnhead\nset title '" + title +
         "'\nset xdata time\nset timefmt '%Y-%m-%d'\nplot '" + data + "' using 1:" +
         std::to_string(ycol) + " with lines\n";
}

// ---------------------------------------------------------------------------
// label

struct LabelCmd {
  std::string headlines, format = "csv", lexicon, out;
  bool gnuplot = false;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("label", "Assign supply/demand classes to headlines");
    c->add_option("--headlines", headlines, "Headline file")->required();
    c->add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    c->add_option("--lexicon", lexicon, "Lexicon file (default: built in)");
    c->add_option("--out", out, "Output directory")->required();
    c->add_flag("--gnuplot", gnuplot, "Also write a gnuplot script for the histogram");
  }

  int run(std::ostream& o) {
    RunConfig cfg;
    cfg.subcommand = "label";
    cfg.inputs["headlines"] = headlines;
    cfg.output_dir = out;
    const Lexicon lex = pick_lexicon(lexicon, cfg);
    const auto hs = load_headlines(
        headlines, format == "jsonl" ? HeadlineFormat::CanonicalJsonl : HeadlineFormat::CanonicalCsv);
    const auto ds = build_silver_dataset(hs, lex);
    const auto dir = prepare_out(out);
    write_csv(dir / "silver.csv", cfg, [&](std::ostream& s) { write_silver_csv(s, ds.labeled); });
    write_csv(dir / "histogram.csv", cfg,
              [&](std::ostream& s) { write_histogram_csv(s, ds.histogram); });
    write_csv(dir / "unmatched.csv", cfg,
              [&](std::ostream& s) { write_headlines_csv(s, ds.unmatched); });
    if (gnuplot)
      write_text(dir / "histogram.gp", cfg,
                 "set datafile separator ','\nset style data histograms\n"
                 "set style histogram rowstacked\nset style fill solid\n"
                 "set xtics rotate by -45\nplot 'histogram.csv' using 2:xtic(1) title 'negative', "
                 "'' using 3 title 'neutral', '' using 4 title 'positive'\n");
    o << "labeled " << ds.labeled.size() << ", unmatched " << ds.unmatched.size() << "\n";
    return 0;
  }
};

// ---------------------------------------------------------------------------
// split

struct SplitCmd {
  std::string silver, out;
  std::vector<double> ratios{0.6, 0.2, 0.2};
  std::uint64_t seed = 0;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("split", "Stratified train/test/validation split");
    c->add_option("--silver", silver, "silver.csv from the label command")->required();
    c->add_option("--ratios", ratios, "Train,test,validation ratios")
        ->delimiter(',')
        ->expected(3);
    c->add_option("--seed", seed, "Shuffle seed");
    c->add_option("--out", out, "Output directory")->required();
  }

  int run(std::ostream& o, std::ostream& e) {
    RunConfig cfg;
    cfg.subcommand = "split";
    cfg.inputs["silver"] = silver;
    cfg.seed = seed;
    cfg.output_dir = out;
    cfg.extra["ratios"] = ratios;
    std::ifstream in(silver, std::ios::binary);
    if (!in) throw IoError("cannot open silver file '" + silver + "'");
    const auto entries = read_silver_csv(in);
    const auto sp = split_dataset(entries, {ratios[0], ratios[1], ratios[2]}, seed);
    report_warnings(e, "split", sp.warnings);
    const auto dir = prepare_out(out);
    write_csv(dir / "train.csv", cfg, [&](std::ostream& s) { write_training_csv(s, sp.train); });
    write_csv(dir / "test.csv", cfg, [&](std::ostream& s) { write_training_csv(s, sp.test); });
    write_csv(dir / "validation.csv", cfg,
              [&](std::ostream& s) { write_training_csv(s, sp.validation); });
    o << "train " << sp.train.size() << ", test " << sp.test.size() << ", validation "
      << sp.validation.size() << "\n";
    return 0;
  }
};

// ---------------------------------------------------------------------------
// signal

struct SignalCmd {
  CorpusOpts corpus;
  SignalOpts sig;
  std::string scores, lexicon, out;
  bool silver = false, gnuplot = false;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("signal", "Build daily signals, returns and normalized prices");
    corpus.add(c, true);
    sig.add(c);
    auto* s = c->add_option("--scores", scores, "Score file (id,score or date,score)");
    auto* sv = c->add_flag("--silver", silver, "Use lexicon labels as scores");
    s->excludes(sv);
    c->add_option("--lexicon", lexicon, "Lexicon file for --silver");
    c->add_option("--out", out, "Output directory")->required();
    c->add_flag("--gnuplot", gnuplot, "Also write gnuplot scripts");
  }

  int run(std::ostream& o, std::ostream& e) {
    RunConfig cfg;
    cfg.subcommand = "signal";
    cfg.output_dir = out;
    const auto opts = sig.options(cfg);
    const auto c = corpus.build(cfg);
    const auto dir = prepare_out(out);

    const auto prices = c.prices();
    const auto rets = returns(prices);
    write_csv(dir / "returns.csv", cfg, [&](std::ostream& s) {
      write_csv_row(s, {"date", "value"});
      for (const auto& r : rets) write_csv_row(s, {format_date(r.date), format_double(r.value)});
    });
    if (prices.size() >= sig.window) {
      ScoreSeries closes;
      for (const auto& p : prices) closes.push_back({p.date, p.close, false});
      const auto zp = znorm(closes, sig.window);
      write_csv(dir / "normalized_prices.csv", cfg,
                [&](std::ostream& s) { write_series_csv(s, zp); });
    }

    if (scores.empty() && !silver) {
      o << "wrote returns for " << rets.size() << " days\n";
      return 0;
    }
    ScoreFile sf;
    if (silver) {
      if (corpus.headlines.empty()) throw UsageError("--silver needs --headlines");
      sf = silver_scores(c, pick_lexicon(lexicon, cfg));
      cfg.inputs["scores"] = "(silver)";
    } else {
      sf = load_score_file(scores);
      cfg.inputs["scores"] = scores;
    }
    const auto build = signal_from_scores(sf, c, opts);
    report_warnings(e, "signal", build.warnings);
    cfg.extra["normalized"] = build.normalized;
    write_csv(dir / "signals.csv", cfg,
              [&](std::ostream& s) { write_signals_csv(s, build.signals); });
    const auto cum = cumulative_series(build.signals);
    write_csv(dir / "cumulative.csv", cfg, [&](std::ostream& s) { write_cumulative_csv(s, cum); });
    if (gnuplot) write_text(dir / "cumulative.gp", cfg, gnuplot_script("cumulative.csv", "cumulative calls", 2));
    o << "wrote " << build.signals.size() << " signals\n";
    return 0;
  }
};

// ---------------------------------------------------------------------------
// backtest

struct BacktestCmd {
  CorpusOpts corpus;
  SignalOpts sig;
  std::vector<std::string> scores;
  std::vector<std::string> classifiers;
  std::string lexicon, out, zero = "down";
  bool silver = false, compare = false, gnuplot = false;
  std::uint64_t seed = 0;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("backtest", "Evaluate classifiers on next-day direction");
    corpus.add(c, true);
    sig.add(c);
    c->add_option("--scores", scores, "Score file; repeat for several classifiers");
    c->add_flag("--silver", silver, "Evaluate lexicon labels as a classifier");
    c->add_option("--classifier", classifiers, "Built-in classifier: random, oracle")
        ->check(CLI::IsMember({"random", "oracle"}));
    c->add_option("--lexicon", lexicon, "Lexicon file for --silver");
    c->add_option("--seed", seed, "Seed for the random classifier");
    c->add_option("--zero-return-policy", zero, "Class of a zero next-day return")
        ->check(CLI::IsMember({"down", "exclude"}));
    c->add_flag("--compare", compare, "Chi-square of the first classifier against the others");
    c->add_option("--out", out, "Output directory")->required();
    c->add_flag("--gnuplot", gnuplot, "Also write gnuplot scripts");
  }

  int run(std::ostream& o, std::ostream& e) {
    RunConfig cfg;
    cfg.subcommand = "backtest";
    cfg.output_dir = out;
    cfg.seed = seed;
    cfg.zero_return_policy = zero;
    const auto opts = sig.options(cfg);
    const auto c = corpus.build(cfg);
    const auto rets = returns(c.prices());
    EvalOptions eval;
    eval.zero_return = zero == "exclude" ? ZeroReturnPolicy::Exclude : ZeroReturnPolicy::Down;

    std::vector<std::pair<std::string, std::vector<DailySignal>>> runs;
    std::set<std::string> names;
    auto unique_name = [&](std::string n) {
      std::string base = n;
      for (int k = 2; names.contains(n); ++k) n = base + "_" + std::to_string(k);
      names.insert(n);
      return n;
    };
    auto from_scores = [&](const std::string& name, const ScoreFile& sf) {
      auto build = signal_from_scores(sf, c, opts);
      report_warnings(e, name, build.warnings);
      runs.emplace_back(unique_name(name), std::move(build.signals));
    };
    for (std::size_t i = 0; i < scores.size(); ++i) {
      cfg.inputs["scores[" + std::to_string(i) + "]"] = scores[i];
      from_scores(fs::path(scores[i]).stem().string(), load_score_file(scores[i]));
    }
    if (silver) {
      if (corpus.headlines.empty()) throw UsageError("--silver needs --headlines");
      from_scores("silver", silver_scores(c, pick_lexicon(lexicon, cfg)));
    }
    for (const auto& k : classifiers) {
      if (k == "random")
        runs.emplace_back(unique_name("random"), random_baseline(c.trading_days, seed));
      else
        runs.emplace_back(unique_name("oracle"), oracle(rets));
    }
    if (runs.empty()) throw UsageError("give --scores, --silver or --classifier");
    cfg.extra["classifiers"] = nlohmann::json::array();
    for (const auto& r : runs) cfg.extra["classifiers"].push_back(r.first);
    cfg.extra["compare"] = compare;

    std::vector<BacktestResult> results;
    for (const auto& [name, signals] : runs) results.push_back(evaluate(name, signals, rets, eval));

    const auto dir = prepare_out(out);
    nlohmann::json doc{{"classifiers", nlohmann::json::array()}};
    std::string text;
    for (const auto& r : results) {
      doc["classifiers"].push_back(backtest_json(r));
      text += format_backtest_text(r) + "\n";
      write_csv(dir / ("confusion_" + r.classifier + ".csv"), cfg, [&](std::ostream& s) {
        std::vector<std::string> head{"truth"};
        for (const auto& n : r.confusion.names) head.push_back(n);
        write_csv_row(s, head);
        for (std::size_t i = 0; i < r.confusion.counts.size(); ++i) {
          std::vector<std::string> row{r.confusion.names[i]};
          for (auto v : r.confusion.counts[i]) row.push_back(std::to_string(v));
          write_csv_row(s, row);
        }
      });
      write_csv(dir / ("cumulative_" + r.classifier + ".csv"), cfg,
                [&](std::ostream& s) { write_cumulative_csv(s, r.cumulative); });
      if (gnuplot)
        write_text(dir / ("cumulative_" + r.classifier + ".gp"), cfg,
                   gnuplot_script("cumulative_" + r.classifier + ".csv", r.classifier, 2));
    }
    if (compare) {
      if (results.size() < 2) throw UsageError("--compare needs at least two classifiers");
      doc["comparisons"] = nlohmann::json::array();
      for (std::size_t i = 1; i < results.size(); ++i) {
        nlohmann::json variants = nlohmann::json::array();
        text += "Chi-square " + results[0].classifier + " vs " + results[i].classifier + "\n";
        for (auto corr : {Correction::None, Correction::Continuity})
          for (auto side : {Sidedness::Two, Sidedness::One}) {
            const auto chi = compare_models(results[0], results[i], corr, side);
            variants.push_back(chi_square_json(chi));
            text += "  correction=" + std::string(to_string(corr)) +
                    " sided=" + std::string(to_string(side)) +
                    " statistic=" + format_double(chi.statistic) +
                    " p=" + format_double(chi.p_value) + "\n";
          }
        doc["comparisons"].push_back(
            {{"a", results[0].classifier}, {"b", results[i].classifier}, {"variants", variants}});
      }
    }
    write_csv(dir / "prices.csv", cfg, [&](std::ostream& s) { write_prices_csv(s, c.prices()); });
    write_json(dir / "report.json", cfg, doc);
    write_text(dir / "report.txt", cfg, text);
    o << text;
    return 0;
  }
};

// ---------------------------------------------------------------------------
// simulate

std::vector<int> parse_sims(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string part;
  auto num = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      int v = std::stoi(s, &used);
      if (used != s.size()) throw UsageError("");
      return v;
    } catch (const std::exception&) {
      throw UsageError("bad simulation list '" + spec + "'");
    }
  };
  while (std::getline(ss, part, ',')) {
    auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(num(part));
    } else {
      int a = num(part.substr(0, dots)), b = num(part.substr(dots + 2));
      if (a > b) throw UsageError("bad simulation range '" + part + "'");
      for (int k = a; k <= b; ++k) out.push_back(k);
    }
  }
  for (int k : out)
    if (k < 1 || k > 9) throw UsageError("simulation ids must be in 1..9");
  if (out.empty()) throw UsageError("no simulations selected");
  return out;
}

struct SimulateCmd {
  std::string sims = "1..9", fixture, test, train, gold, out;
  bool live = false, strict = false;
  HttpClientConfig http;
  RetryPolicy retry;
  long long backoff_ms = 500;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("simulate", "Run the nine prompt simulations");
    c->add_option("--sims", sims, "Simulation ids, e.g. 1..9 or 1,5,9");
    auto* f = c->add_option("--fixture", fixture, "Label table to replay: 'bundled' or a file");
    auto* l = c->add_flag("--live", live, "Call the completion endpoint");
    f->excludes(l);
    c->add_option("--test", test, "Test headlines (default: bundled 18-headline set)");
    c->add_option("--train", train, "Training set id,label,text (default: bundled)");
    c->add_option("--gold", gold, "Gold labels id,label,text for a custom test set");
    c->add_flag("--strict", strict, "Strict reply parsing");
    c->add_option("--endpoint", http.endpoint, "Completion endpoint URL");
    c->add_option("--model", http.model, "Model name");
    c->add_option("--credential-env", http.credential_env, "Variable holding the API key");
    c->add_option("--temperature", http.temperature, "Sampling temperature");
    c->add_option("--timeout", http.timeout_seconds, "Request timeout in seconds");
    c->add_option("--max-retries", retry.max_retries, "Retries on transport failure");
    c->add_option("--backoff-ms", backoff_ms, "First retry delay");
    c->add_option("--rate-limit", retry.rate_limit_per_minute, "Requests per minute (0: none)");
    c->add_option("--max-in-flight", retry.max_in_flight, "Concurrent requests");
    c->add_option("--out", out, "Output directory")->required();
  }

  int run(std::ostream& o) {
    RunConfig cfg;
    cfg.subcommand = "simulate";
    cfg.output_dir = out;
    const auto ids = parse_sims(sims);
    if (!live && fixture.empty()) throw UsageError("give --fixture or --live");
    retry.backoff = std::chrono::milliseconds(backoff_ms);

    SimulationInputs inputs;
    std::vector<std::pair<std::string, int>> gold_labels;
    if (test.empty()) {
      inputs.test = fixtures::gold_test_set();
      gold_labels = fixtures::simulation_column("true").labels;
      cfg.inputs["test"] = "(bundled)";
    } else {
      inputs.test = load_headlines(test, HeadlineFormat::CanonicalCsv);
      cfg.inputs["test"] = test;
      if (gold.empty()) throw UsageError("--test needs --gold");
    }
    if (!gold.empty()) {
      std::ifstream in(gold, std::ios::binary);
      if (!in) throw IoError("cannot open gold file '" + gold + "'");
      gold_labels.clear();
      for (const auto& g : fixtures::read_labeled_texts(in)) gold_labels.emplace_back(g.id, g.label);
      cfg.inputs["gold"] = gold;
    }
    if (train.empty()) {
      inputs.train = fixtures::gold_training_set();
      cfg.inputs["train"] = "(bundled)";
    } else {
      std::ifstream in(train, std::ios::binary);
      if (!in) throw IoError("cannot open training file '" + train + "'");
      inputs.train = fixtures::read_labeled_texts(in);
      cfg.inputs["train"] = train;
    }

    std::unique_ptr<CompletionClient> client;
    if (live) {
      client = make_http_client(http);
      cfg.extra["client"] = {{"kind", "live"},
                             {"endpoint", http.endpoint},
                             {"model", http.model},
                             {"credential_env", http.credential_env},
                             {"temperature", http.temperature},
                             {"max_tokens", http.max_tokens},
                             {"timeout_seconds", http.timeout_seconds}};
    } else {
      std::vector<fixtures::LabelColumn> cols;
      if (fixture == "bundled") {
        cols = fixtures::simulation_labels();
      } else {
        std::ifstream in(fixture, std::ios::binary);
        if (!in) throw IoError("cannot open fixture '" + fixture + "'");
        cols = fixtures::read_label_table(in);
      }
      client = std::make_unique<FixtureClient>(cols);
      cfg.extra["client"] = {{"kind", "fixture"}, {"fixture", fixture}};
    }
    cfg.extra["sims"] = ids;
    cfg.extra["parse_mode"] = strict ? "strict" : "lax";
    cfg.extra["retry"] = {{"max_retries", retry.max_retries},
                          {"backoff_ms", backoff_ms},
                          {"rate_limit_per_minute", retry.rate_limit_per_minute},
                          {"max_in_flight", retry.max_in_flight}};

    SimulationRunner runner(*client, retry, strict ? ParseMode::Strict : ParseMode::Lax);
    const auto results = runner.run_many(ids, inputs);

    const auto dir = prepare_out(out);
    nlohmann::json doc{{"simulations", nlohmann::json::array()}};
    std::string text;
    for (const auto& r : results) {
      const auto rep = score_simulation(r.predictions, gold_labels);
      nlohmann::json preds = nlohmann::json::object();
      for (const auto& [id, cls] : r.predictions) preds[id] = class_name(cls);
      doc["simulations"].push_back({{"sim", r.sim},
                                    {"model", r.model},
                                    {"timestamp", r.timestamp},
                                    {"retries", r.retries},
                                    {"predictions", preds},
                                    {"raw_response", r.raw_response},
                                    {"report", report_json(rep)}});
      text += format_report_text(rep, "Simulation " + std::to_string(r.sim)) + "\n";
      const std::string stem = "sim" + std::to_string(r.sim);
      write_text(dir / (stem + "_prompt.txt"), cfg, r.prompt);
      write_text(dir / (stem + "_response.txt"), cfg, r.raw_response);
    }
    write_csv(dir / "predictions.csv", cfg, [&](std::ostream& s) {
      write_csv_row(s, {"sim", "headline_id", "label"});
      for (const auto& r : results)
        for (const auto& h : inputs.test)
          write_csv_row(s, {std::to_string(r.sim), h.id,
                            std::string(class_name(r.predictions.at(h.id)))});
    });
    write_csv(dir / "scores.csv", cfg, [&](std::ostream& s) {
      write_csv_row(s, {"sim", "macro_f1", "weighted_f1", "accuracy"});
      for (const auto& sim : doc["simulations"]) {
        const auto& rep = sim["report"];
        write_csv_row(s, {std::to_string(sim["sim"].get<int>()),
                          format_double(rep["table"]["F1-Score"]["Macro"].get<double>()),
                          format_double(rep["weighted"]["F1-Score"].get<double>()),
                          format_double(rep["accuracy"].get<double>())});
      }
    });
    write_json(dir / "simulations.json", cfg, doc);
    write_text(dir / "report.txt", cfg, text);
    o << text;
    return 0;
  }
};

// ---------------------------------------------------------------------------
// report

struct ReportCmd {
  std::string input;
  std::vector<std::string> chi;

  void add(CLI::App& app) {
    auto* c = app.add_subcommand("report", "Render saved reports or run a chi-square comparison");
    auto* i = c->add_option("--input", input, "report.json or simulations.json");
    auto* x = c->add_option("--chi-square", chi, "Two counts as correct/total, e.g. 1774/3376")
                  ->delimiter(',')
                  ->expected(2);
    i->excludes(x);
  }

  static std::pair<std::size_t, std::size_t> counts(const std::string& s) {
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) throw UsageError("");
      std::size_t u1 = 0, u2 = 0;
      const auto a = std::stoull(s.substr(0, slash), &u1);
      const auto b = std::stoull(s.substr(slash + 1), &u2);
      if (u1 != slash || u2 != s.size() - slash - 1) throw UsageError("");
      return {a, b};
    } catch (const std::exception&) {
      throw UsageError("expected correct/total, got '" + s + "'");
    }
  }

  static ClassificationReport from_json(const nlohmann::json& r) {
    ClassificationReport rep;
    const auto& t = r.at("table");
    for (const auto& [name, support] : r.at("support").items()) {
      ClassMetrics c;
      c.name = name;
      c.precision = t.at("Precision").at(name).get<double>();
      c.recall = t.at("Recall").at(name).get<double>();
      c.f1 = t.at("F1-Score").at(name).get<double>();
      c.support = support.get<std::size_t>();
      rep.per_class.push_back(c);
    }
    rep.macro = {t.at("Precision").at("Macro").get<double>(), t.at("Recall").at("Macro").get<double>(),
                 t.at("F1-Score").at("Macro").get<double>()};
    const auto& w = r.at("weighted");
    rep.weighted = {w.at("Precision").get<double>(), w.at("Recall").get<double>(),
                    w.at("F1-Score").get<double>()};
    rep.accuracy = r.at("accuracy").get<double>();
    rep.total = r.at("total").get<std::size_t>();
    return rep;
  }

  int run(std::ostream& o) {
    if (!chi.empty()) {
      const auto [ca, ta] = counts(chi[0]);
      const auto [cb, tb] = counts(chi[1]);
      for (auto corr : {Correction::None, Correction::Continuity})
        for (auto side : {Sidedness::Two, Sidedness::One}) {
          const auto r = chi_square_2x2(ca, ta, cb, tb, corr, side);
          o << "correction=" << to_string(corr) << " sided=" << to_string(side)
            << " statistic=" << format_double(r.statistic) << " p=" << format_double(r.p_value)
            << "\n";
        }
      return 0;
    }
    if (input.empty()) throw UsageError("give --input or --chi-square");
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(read_file(input));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("invalid report JSON: ") + e.what());
    }
    try {
      if (doc.contains("classifiers")) {
        for (const auto& c : doc["classifiers"])
          o << format_report_text(from_json(c.at("report")),
                                  "Classifier: " + c.at("classifier").get<std::string>())
            << "\n";
        if (doc.contains("comparisons"))
          for (const auto& cmp : doc["comparisons"]) {
            o << "Chi-square " << cmp.at("a").get<std::string>() << " vs "
              << cmp.at("b").get<std::string>() << "\n";
            for (const auto& v : cmp.at("variants"))
              o << "  correction=" << v.at("correction").get<std::string>()
                << " sided=" << v.at("sidedness").get<std::string>()
                << " statistic=" << format_double(v.at("statistic").get<double>())
                << " p=" << format_double(v.at("p_value").get<double>()) << "\n";
          }
      } else if (doc.contains("simulations")) {
        for (const auto& s : doc["simulations"])
          o << format_report_text(from_json(s.at("report")),
                                  "Simulation " + std::to_string(s.at("sim").get<int>()))
            << "\n";
      } else {
        throw ValidationError("unrecognized report document");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("report document is missing fields: ") + e.what());
    }
    return 0;
  }
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Crude-oil headline sentiment labelling and backtesting"};
  app.require_subcommand(1);
  LabelCmd label;
  SplitCmd split;
  SignalCmd signal;
  BacktestCmd backtest;
  SimulateCmd simulate;
  ReportCmd report;
  label.add(app);
  split.add(app);
  signal.add(app);
  backtest.add(app);
  simulate.add(app);
  report.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "label") return label.run(out);
    if (name == "split") return split.run(out, err);
    if (name == "signal") return signal.run(out, err);
    if (name == "backtest") return backtest.run(out, err);
    if (name == "simulate") return simulate.run(out);
    if (name == "report") return report.run(out);
    err << "error: unknown subcommand\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace oilsent::cli

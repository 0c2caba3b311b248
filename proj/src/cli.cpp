#include "catfish/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "catfish/analytics.hpp"
#include "catfish/detector.hpp"
#include "catfish/error.hpp"
#include "catfish/eval.hpp"
#include "catfish/pipeline.hpp"
#include "catfish/synth.hpp"
#include "json.hpp"

#ifndef CATFISH_VERSION
#define CATFISH_VERSION "0.0.0"
#endif

namespace catfish::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnv);
  if (!env || !*env) return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw ConfigError(std::string(kSeedEnv) + " must be an unsigned integer");
  return v;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  return out;
}

struct Manifest {
  std::string command;
  json options = json::object();
  std::vector<std::string> inputs;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  // Sidecar `<artifact>.manifest.json` next to the artifact.
  void write(const fs::path& artifact) const {
    json j;
    j["command"] = command;
    j["options"] = options;
    j["inputs"] = inputs;
    j["output"] = artifact.string();
    j["seed"] = options.value("seed", json(nullptr));
    j["tool_version"] = CATFISH_VERSION;
    j["duration_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto out = open_out(fs::path(artifact.string() + ".manifest.json"));
    out << j.dump(1) << '\n';
  }
};

struct Common {
  std::string corpus;
  std::string task = "gender";
  std::string features = "all";
  std::size_t min_comments = kDefaultMinComments;
  std::size_t min_df = kDefaultMinDf;
  double C = 1.0;
  double epsilon = 1.0;
  bool balanced = false;
  std::string lexicon;
  std::uint64_t seed = 0;
};

PipelineOptions pipeline_options(const Common& c) {
  PipelineOptions o;
  o.groups = parse_feature_groups(c.features);
  o.min_comments = c.min_comments;
  o.min_df = c.min_df;
  o.train.C = c.C;
  o.train.epsilon = c.epsilon;
  o.train.balanced = c.balanced;
  o.train.seed = c.seed;
  o.train.validate();
  o.lexicon = c.lexicon.empty() ? synthetic_lexicon() : load_lexicon(c.lexicon);
  return o;
}

json common_json(const Common& c) {
  return {{"corpus", c.corpus},       {"task", c.task},         {"features", c.features},
          {"min_comments", c.min_comments}, {"min_df", c.min_df}, {"C", c.C},
          {"epsilon", c.epsilon},     {"balanced", c.balanced},
          {"lexicon", c.lexicon.empty() ? "builtin" : c.lexicon}, {"seed", c.seed}};
}

Corpus read_input(const std::string& path, std::ostream& err) {
  std::vector<std::string> rejected;
  Corpus c = load_corpus(path, &rejected);
  if (!rejected.empty()) err << "skipped " << rejected.size() << " under-age record(s)\n";
  return c;
}

void add_training_flags(CLI::App* sub, Common& c) {
  sub->add_option("--features", c.features, "content, network or all")
      ->check(CLI::IsMember({"content", "network", "all"}))
      ->capture_default_str();
  sub->add_option("--min-comments", c.min_comments, "eligibility floor")->capture_default_str();
  sub->add_option("--min-df", c.min_df, "vocabulary document-frequency floor")->capture_default_str();
  sub->add_option("--C", c.C, "loss weight")->capture_default_str();
  sub->add_option("--epsilon", c.epsilon, "regression tube half-width (years)")->capture_default_str();
  sub->add_flag("--balanced", c.balanced, "reweight classes by inverse frequency");
  sub->add_option("--lexicon", c.lexicon, "lexicon file (default: built-in)")
      ->check(CLI::ExistingFile);
}

std::string summarize_oracle(const OracleReport& r) {
  std::ostringstream ss;
  ss << "oracle: covered=" << r.covered << " planted_uncovered=" << r.planted_uncovered
     << " precision=" << r.overall.precision << " recall=" << r.overall.recall
     << " gender_precision=" << r.gender.precision << " gender_recall=" << r.gender.recall
     << " age_precision=" << r.age.precision << " age_recall=" << r.age.recall << "\n";
  return ss.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Catfish detection pipeline: synthesize, train, evaluate, detect, analyze", "catfish"};
  app.set_version_flag("--version", CATFISH_VERSION);
  app.require_subcommand(1);

  std::uint64_t seed_default = 0;
  try {
    seed_default = default_seed();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  // synth
  SynthConfig sc;
  sc.seed = seed_default;
  std::string synth_out, synth_truth;
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus with planted catfish");
  synth->add_option("--out", synth_out, "corpus JSONL path")->required();
  synth->add_option("--truth", synth_truth, "ground-truth JSONL (default: <out stem>.truth.jsonl)");
  synth->add_option("--n", sc.n_profiles, "number of profiles")->capture_default_str();
  synth->add_option("--verified-fraction", sc.verified_fraction)->capture_default_str();
  synth->add_option("--catfish-fraction", sc.catfish_fraction)->capture_default_str();
  synth->add_option("--male-share", sc.male_share)->capture_default_str();
  synth->add_option("--age-signal", sc.age_signal)->capture_default_str();
  synth->add_option("--gender-signal", sc.gender_signal)->capture_default_str();
  synth->add_option("--age-noise", sc.age_noise, "years")->capture_default_str();
  synth->add_option("--seed", sc.seed, "random seed (default from CATFISH_SEED)")->capture_default_str();

  // train
  Common tr;
  tr.seed = seed_default;
  std::string train_out;
  auto* train = app.add_subcommand("train", "fit a gender or age predictor on verified profiles");
  train->add_option("--corpus", tr.corpus, "corpus JSONL")->required()->check(CLI::ExistingFile);
  train->add_option("--task", tr.task, "gender or age")
      ->required()
      ->check(CLI::IsMember({"gender", "age"}));
  train->add_option("--out", train_out, "model file")->required();
  train->add_option("--seed", tr.seed)->capture_default_str();
  add_training_flags(train, tr);

  // evaluate
  Common ev;
  ev.seed = seed_default;
  std::size_t k = 10;
  std::string eval_out;
  auto* evaluate = app.add_subcommand("evaluate", "k-fold cross-validation on verified profiles");
  evaluate->add_option("--corpus", ev.corpus)->required()->check(CLI::ExistingFile);
  evaluate->add_option("--task", ev.task)->check(CLI::IsMember({"gender", "age"}))->capture_default_str();
  evaluate->add_option("--k", k, "folds")->capture_default_str();
  evaluate->add_option("--seed", ev.seed)->capture_default_str();
  evaluate->add_option("--out", eval_out, "report CSV");
  add_training_flags(evaluate, ev);

  // detect
  std::string det_corpus, gmodel, amodel, det_out, det_truth, det_summary;
  DetectorConfig dc;
  auto* detect = app.add_subcommand("detect", "flag unverified profiles as potential catfish");
  detect->add_option("--corpus", det_corpus)->required()->check(CLI::ExistingFile);
  detect->add_option("--gender-model", gmodel)->required()->check(CLI::ExistingFile);
  detect->add_option("--age-model", amodel)->required()->check(CLI::ExistingFile);
  detect->add_option("--threshold", dc.age_threshold, "age threshold in years")->capture_default_str();
  detect->add_option("--min-comments", dc.min_comments)->capture_default_str();
  detect->add_option("--out", det_out, "verdict CSV")->required();
  detect->add_option("--summary", det_summary, "per-gender rate CSV");
  detect->add_option("--truth", det_truth, "ground truth; prints oracle precision/recall")
      ->check(CLI::ExistingFile);

  // analyze
  std::string an_corpus, an_verdicts, an_dir;
  auto* analyze = app.add_subcommand("analyze", "characterization and catfish-benefit reports");
  analyze->add_option("--corpus", an_corpus)->required()->check(CLI::ExistingFile);
  analyze->add_option("--verdicts", an_verdicts, "verdict CSV from detect")->check(CLI::ExistingFile);
  analyze->add_option("--out-dir", an_dir, "report directory")->required();

  std::vector<std::string> argv_store{"catfish"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (synth->parsed()) {
      Manifest m{"synth"};
      m.options = {{"n", sc.n_profiles},           {"verified_fraction", sc.verified_fraction},
                   {"catfish_fraction", sc.catfish_fraction}, {"male_share", sc.male_share},
                   {"age_signal", sc.age_signal},   {"gender_signal", sc.gender_signal},
                   {"age_noise", sc.age_noise},     {"seed", sc.seed}};
      const auto result = generate(sc);
      fs::path corpus_path(synth_out);
      fs::path truth_path = synth_truth.empty()
                                ? corpus_path.parent_path() / (corpus_path.stem().string() + ".truth.jsonl")
                                : fs::path(synth_truth);
      {
        auto o = open_out(corpus_path);
        write_corpus(o, result.corpus);
      }
      {
        auto o = open_out(truth_path);
        write_truth(o, result.truth);
      }
      m.write(corpus_path);
      m.write(truth_path);
      out << "wrote " << result.corpus.size() << " profiles (" << result.truth.planted()
          << " planted catfish) to " << corpus_path.string() << "\n";
    } else if (train->parsed()) {
      Manifest m{"train", common_json(tr), {tr.corpus}};
      const auto corpus = read_input(tr.corpus, err);
      const auto opts = pipeline_options(tr);
      const Task task = parse_task(tr.task);
      const auto population = training_population(corpus, task, opts.min_comments);
      if (population.empty())
        throw ConfigError("no verified, labeled profiles with at least " +
                          std::to_string(opts.min_comments) + " comments to train on");
      std::string doc;
      if (task == Task::Gender) {
        const auto p = fit_gender(population, opts);
        doc = serialize(p);
        if (!p.model.training.converged) err << "warning: solver stopped before convergence\n";
      } else {
        const auto p = fit_age(population, opts);
        doc = serialize(p);
        if (!p.model.training.converged) err << "warning: solver stopped before convergence\n";
      }
      {
        auto o = open_out(train_out);
        o << doc;
      }
      m.write(train_out);
      out << "trained " << tr.task << " model on " << population.size() << " profiles -> "
          << train_out << "\n";
    } else if (evaluate->parsed()) {
      Manifest m{"evaluate", common_json(ev), {ev.corpus}};
      m.options["k"] = k;
      const auto corpus = read_input(ev.corpus, err);
      const auto opts = pipeline_options(ev);
      const auto report = cross_validate(corpus, parse_task(ev.task), opts, k, ev.seed);
      for (const auto& w : report.warnings) err << "warning: " << w << "\n";
      print_report_table(out, report);
      if (!eval_out.empty()) {
        {
          auto o = open_out(eval_out);
          write_report_csv(o, report);
        }
        m.write(eval_out);
      }
    } else if (detect->parsed()) {
      Manifest m{"detect"};
      m.options = {{"corpus", det_corpus},     {"gender_model", gmodel}, {"age_model", amodel},
                   {"threshold", dc.age_threshold}, {"min_comments", dc.min_comments}};
      m.inputs = {det_corpus, gmodel, amodel};
      dc.validate();
      const auto corpus = read_input(det_corpus, err);
      const auto g = load_gender_predictor(gmodel);
      const auto a = load_age_predictor(amodel);
      const auto result = scan_corpus(corpus, g, a, dc);
      for (const auto& w : result.warnings) err << "warning: " << w << "\n";
      {
        auto o = open_out(det_out);
        write_verdicts_csv(o, result.verdicts);
      }
      m.write(det_out);
      if (!det_summary.empty()) {
        {
          auto o = open_out(det_summary);
          write_summary_csv(o, result.summary);
        }
        m.write(det_summary);
      }
      out << "scanned " << result.summary.scanned << " eligible unverified profiles, flagged "
          << result.summary.flagged << "\n";
      for (Gender gd : {Gender::Male, Gender::Female}) {
        const auto& r = result.summary.by_reported_gender.at(gd);
        out << "  " << to_string(gd) << ": " << r.flagged << "/" << r.scanned << " (rate "
            << r.rate << ")\n";
      }
      if (!det_truth.empty()) {
        const auto truth = load_truth(det_truth);
        out << summarize_oracle(oracle_eval(corpus, truth, result.verdicts));
      }
    } else if (analyze->parsed()) {
      Manifest m{"analyze", {{"corpus", an_corpus}, {"verdicts", an_verdicts}, {"out_dir", an_dir}}};
      m.inputs = {an_corpus};
      if (!an_verdicts.empty()) m.inputs.push_back(an_verdicts);
      const auto corpus = read_input(an_corpus, err);
      const fs::path dir(an_dir);
      fs::create_directories(dir);
      std::vector<fs::path> written;
      auto emit2 = [&](const char* a, const char* b, auto&& fn) {
        auto oa = open_out(dir / a);
        auto ob = open_out(dir / b);
        fn(oa, ob);
        written.push_back(dir / a);
        written.push_back(dir / b);
      };
      const auto demo = demographic_report(corpus);
      emit2("demographics_age.csv", "demographics_summary.csv",
            [&](auto& a, auto& b) { write_demographic_csv(a, b, demo); });
      if (!an_verdicts.empty()) {
        const auto verdicts = load_verdicts(an_verdicts);
        if (verdicts.empty()) {
          err << "warning: verdict file is empty; catfish reports skipped\n";
        } else {
          const auto pop = popularity_report(corpus, verdicts);
          emit2("popularity_groups.csv", "popularity_points.csv",
                [&](auto& a, auto& b) { write_popularity_csv(a, b, pop); });
          const auto gain = interest_gain_report(corpus, verdicts);
          emit2("interest_friends_by_age.csv", "interest_shares.csv",
                [&](auto& a, auto& b) { write_interest_gain_csv(a, b, gain); });
          const auto diff = age_diff_report(verdicts);
          {
            auto o = open_out(dir / "age_diff.csv");
            write_age_diff_csv(o, diff);
          }
          written.push_back(dir / "age_diff.csv");
        }
      }
      for (const auto& p : written) m.write(p);
      out << "wrote " << written.size() << " report file(s) to " << dir.string() << "\n";
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace catfish::cli

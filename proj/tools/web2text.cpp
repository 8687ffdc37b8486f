// web2text command line: extract, label, train, eval, synth, features.

#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "w2t/aligner.hpp"
#include "w2t/corpus.hpp"
#include "w2t/dom.hpp"
#include "w2t/model.hpp"
#include "w2t/pipeline.hpp"
#include "w2t/synthetic.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace w2t;

namespace {

void set_jobs(int jobs) {
  if (jobs > 0) omp_set_num_threads(jobs);
}

std::string read_stdin() {
  return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
}

fs::path manifest_path(const std::string& corpus, const std::string& manifest) {
  return manifest.empty() ? fs::path(corpus) / "manifest.txt" : fs::path(manifest);
}

json extraction_json(const std::string& source, const Extraction& e) {
  json blocks = json::array();
  for (std::size_t i = 0; i < e.blocks.size(); ++i) {
    const TextBlock& b = e.blocks[i];
    blocks.push_back({{"index", i},
                      {"label", e.labels[i]},
                      {"p_content", e.potentials.unary[i][1]},
                      {"source_offset", b.source_offset},
                      {"source_length", b.source_length},
                      {"text", b.text}});
  }
  return {{"source", source}, {"blocks", blocks}, {"text", e.text}};
}

int run_extract(const std::string& model_path, std::optional<double> lambda, bool as_json,
                const std::vector<std::string>& inputs) {
  if (model_path.empty()) {
    std::cerr << "error: no model given (use --model or set W2T_MODEL)\n";
    return 2;
  }
  Model model;
  try {
    model = load_model(fs::path(model_path));
  } catch (const ModelError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (lambda && *lambda < 0.0) {
    std::cerr << "error: --lambda must be non-negative\n";
    return 1;
  }

  int status = 0;
  const std::vector<std::string> sources = inputs.empty() ? std::vector<std::string>{"-"} : inputs;
  for (const std::string& source : sources) {
    std::string html;
    try {
      html = source == "-" ? read_stdin() : read_file(source);
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      status = 1;
      continue;
    }
    try {
      const Extraction e = extract(model, html, lambda);
      if (as_json) {
        std::cout << extraction_json(source, e).dump() << "\n";
      } else {
        std::cout << e.text;
        if (!e.text.empty()) std::cout << "\n";
      }
    } catch (const ParseError& e) {
      std::cerr << "error: " << source << ": " << e.what() << "\n";
      status = 1;
    }
  }
  return status;
}

int label_one(const std::string& html_path, const std::string& clean_path, const std::string& output,
              bool cleaneval) {
  const Page page = analyze_page(read_file(html_path));
  std::string clean = read_file(clean_path);
  if (cleaneval) clean = strip_cleaneval_markup(clean);
  const AlignmentResult r = align(page.blocks, clean);
  const std::string text = format_labels(r.labels, r.ratios);
  if (output.empty() || output == "-") {
    std::cout << text;
  } else {
    write_file(output, text);
  }
  return 0;
}

int label_corpus(const std::string& dir, const std::string& manifest, bool cleaneval) {
  const auto entries = read_manifest(manifest_path(dir, manifest));
  std::vector<std::string> errors(entries.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(entries.size()); ++k) {
    const std::string& id = entries[static_cast<std::size_t>(k)].id;
    try {
      const Page page = analyze_page(read_file(fs::path(dir) / (id + ".html")));
      std::string clean = read_file(fs::path(dir) / (id + ".txt"));
      if (cleaneval) clean = strip_cleaneval_markup(clean);
      const AlignmentResult r = align(page.blocks, clean);
      write_file(fs::path(dir) / (id + ".labels"), format_labels(r.labels, r.ratios));
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(k)] = e.what();
    }
  }
  int status = 0;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (errors[k].empty()) continue;
    std::cerr << "error: " << entries[k].id << ": " << errors[k] << "\n";
    status = 1;
  }
  return status;
}

Corpus load_or_report(const std::string& dir, const std::string& manifest) {
  return load_corpus(dir, read_manifest(manifest_path(dir, manifest)));
}

const char* network_name(NetworkKind kind) { return kind == NetworkKind::kUnary ? "unary" : "pairwise"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Boilerplate removal with convolutional networks and a linear-chain decoder"};
  app.require_subcommand(1);
  int jobs = 0;
  app.add_option("-j,--jobs", jobs, "Worker threads (default: OpenMP default)");

  // extract
  auto* extract_cmd = app.add_subcommand("extract", "Print the main content of HTML files");
  std::string model_path;
  std::optional<double> lambda;
  bool as_json = false;
  std::vector<std::string> inputs;
  extract_cmd->add_option("-m,--model", model_path, "Model file")->envname("W2T_MODEL");
  extract_cmd->add_option("--lambda", lambda, "Pairwise weight (overrides the model)");
  extract_cmd->add_flag("--json", as_json, "One JSON record per input with per-block details");
  extract_cmd->add_option("inputs", inputs, "HTML files ('-' or none reads stdin)");

  // label
  auto* label_cmd = app.add_subcommand("label", "Derive block labels by aligning cleaned text");
  std::string html_path, clean_path, label_out, label_corpus_dir, label_manifest;
  bool cleaneval = false;
  label_cmd->add_option("--html", html_path, "Raw page");
  label_cmd->add_option("--clean", clean_path, "Cleaned text of the page");
  label_cmd->add_option("-o,--output", label_out, "Label file (default stdout)");
  label_cmd->add_option("--corpus", label_corpus_dir, "Label every <id>.html/<id>.txt pair in a corpus");
  label_cmd->add_option("--manifest", label_manifest, "Manifest (default <corpus>/manifest.txt)");
  label_cmd->add_flag("--cleaneval", cleaneval, "Strip CleanEval URL line and paragraph markers");

  // train
  auto* train_cmd = app.add_subcommand("train", "Train a model on a labeled corpus");
  std::string corpus_dir, manifest, output, log_path;
  TrainConfig cfg;
  bool resume = false;
  train_cmd->add_option("--corpus", corpus_dir, "Corpus directory")->required();
  train_cmd->add_option("--manifest", manifest, "Manifest (default <corpus>/manifest.txt)");
  train_cmd->add_option("-o,--output", output, "Model file to write")->required();
  train_cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  train_cmd->add_option("--iterations", cfg.iterations, "Adam steps per network")->capture_default_str();
  train_cmd->add_option("--batch-size", cfg.batch_size, "Excerpts per batch")->capture_default_str();
  train_cmd->add_option("--learning-rate", cfg.learning_rate, "Adam step size")->capture_default_str();
  train_cmd->add_option("--lambda", cfg.lambda, "Pairwise weight stored in the model")->capture_default_str();
  train_cmd->add_option("--log", log_path, "Write validation checkpoints here");
  train_cmd->add_flag("--resume", resume, "Not supported: training always starts fresh");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Block-level metrics on a corpus split");
  std::string eval_model, eval_corpus, eval_manifest, split = "test";
  std::optional<double> eval_lambda;
  bool eval_json = false;
  eval_cmd->add_option("-m,--model", eval_model, "Model file")->envname("W2T_MODEL")->required();
  eval_cmd->add_option("--corpus", eval_corpus, "Corpus directory")->required();
  eval_cmd->add_option("--manifest", eval_manifest, "Manifest (default <corpus>/manifest.txt)");
  eval_cmd->add_option("--split", split, "train, validation or test")->capture_default_str();
  eval_cmd->add_option("--lambda", eval_lambda, "Pairwise weight (overrides the model)");
  eval_cmd->add_flag("--json", eval_json, "Print metrics as JSON");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic labeled corpus");
  std::string synth_dir;
  std::size_t n_train = 200, n_val = 30, n_test = 30;
  std::uint64_t synth_seed = 1;
  synth_cmd->add_option("-o,--output", synth_dir, "Directory to create")->required();
  synth_cmd->add_option("--train", n_train)->capture_default_str();
  synth_cmd->add_option("--validation", n_val)->capture_default_str();
  synth_cmd->add_option("--test", n_test)->capture_default_str();
  synth_cmd->add_option("--seed", synth_seed)->capture_default_str();

  auto* features_cmd = app.add_subcommand("features", "Print the block and edge feature layout");

  CLI11_PARSE(app, argc, argv);
  set_jobs(jobs);

  try {
    if (*extract_cmd) return run_extract(model_path, lambda, as_json, inputs);

    if (*label_cmd) {
      if (!label_corpus_dir.empty()) return label_corpus(label_corpus_dir, label_manifest, cleaneval);
      if (html_path.empty() || clean_path.empty()) {
        std::cerr << "error: label needs --html and --clean, or --corpus\n";
        return 1;
      }
      return label_one(html_path, clean_path, label_out, cleaneval);
    }

    if (*train_cmd) {
      if (resume) {
        std::cerr << "error: --resume is not supported; training always starts from a fresh "
                     "initialization\n";
        return 1;
      }
      Corpus corpus;
      try {
        corpus = load_or_report(corpus_dir, manifest);
      } catch (const CorpusError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
      std::ofstream log;
      if (!log_path.empty()) {
        log.open(log_path);
        if (!log) {
          std::cerr << "error: cannot write " << log_path << "\n";
          return 1;
        }
      }
      cfg.on_progress = [&](const ProgressRecord& r) {
        char line[160];
        std::snprintf(line, sizeof line, "network=%s step=%zu train_loss=%.6f val_loss=%.6f best=%d\n",
                      network_name(r.network), r.step, r.train_loss, r.validation_loss,
                      r.improved ? 1 : 0);
        std::cerr << line;
        if (log) log << line << std::flush;
      };
      const Model model = train(corpus, cfg);
      save_model(model, fs::path(output));
      return 0;
    }

    if (*eval_cmd) {
      Model model;
      try {
        model = load_model(fs::path(eval_model));
      } catch (const ModelError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
      }
      const Split which = parse_split(split);
      Corpus corpus;
      try {
        corpus = load_or_report(eval_corpus, eval_manifest);
      } catch (const CorpusError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
      }
      const std::vector<CorpusPage>& pages = corpus.split(which);
      if (pages.empty()) {
        std::cerr << "error: split '" << split << "' is empty\n";
        return 1;
      }
      const Confusion c = evaluate(model, pages, eval_lambda.value_or(model.lambda));
      const Metrics m = c.metrics();
      if (eval_json) {
        std::cout << json{{"split", split},   {"pages", pages.size()}, {"blocks", c.total()},
                          {"accuracy", m.accuracy}, {"precision", m.precision},
                          {"recall", m.recall},     {"f1", m.f1}}
                         .dump()
                  << "\n";
      } else {
        std::printf("pages %zu blocks %zu\naccuracy %.4f\nprecision %.4f\nrecall %.4f\nf1 %.4f\n",
                    pages.size(), c.total(), m.accuracy, m.precision, m.recall, m.f1);
      }
      return 0;
    }

    if (*synth_cmd) {
      write_corpus(generate_corpus(n_train, n_val, n_test, synth_seed), synth_dir);
      return 0;
    }

    if (*features_cmd) {
      std::size_t i = 0;
      for (const auto* layout : {&block_feature_layout(), &edge_feature_layout()}) {
        std::cout << (layout == &block_feature_layout() ? "# block\n" : "# edge\n");
        i = 0;
        for (const FeatureSpec& f : *layout) {
          std::printf("%3zu %-32s %s", i++, f.name.c_str(), f.binary ? "binary" : "real");
          if (f.clipped) std::printf(" clip[%g, %g]", f.lo, f.hi);
          std::printf("\n");
        }
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

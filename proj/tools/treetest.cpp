// treetest: command line front end for tree-population statistics.
//
// Exit codes: 0 success, 1 usage error, 2 data or validation error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "treetest/treetest.hpp"

namespace {

using namespace treetest;

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct Common {
  std::string seed = std::to_string(kDefaultSeed);
  unsigned threads = 1;
  bool json = false;
};

std::uint64_t resolve_seed(const std::string& text) {
  if (text == "random") {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  std::size_t used = 0;
  std::uint64_t seed = 0;
  try {
    seed = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || text[0] == '-') {
    throw CLI::ValidationError("--seed", "expected an unsigned integer or 'random', got '" + text + "'");
  }
  return seed;
}

void add_seed(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Random seed (unsigned integer) or 'random'")->capture_default_str();
}

void add_threads(CLI::App* cmd, Common& c) {
  cmd->add_option("--threads", c.threads, "Worker threads; results do not depend on it")
      ->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
}

// Writes to `path`, or stdout when it is empty.
void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  if (!out.flush()) throw IoError("failed writing '" + path + "'");
}

std::string sample_text(const SampleFile& f) {
  std::ostringstream os;
  write_sample(os, f);
  return os.str();
}

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

Json tree_json(const Tree& t, const std::string& glyphs) {
  Json nodes = Json::array();
  for (const auto& v : t.nodes()) nodes.push_back(v.to_string(glyphs, kRootToken));
  return nodes;
}

// Keys outside any [section] belong to the subcommand being run.
class SubcommandConfig : public CLI::ConfigTOML {
 public:
  explicit SubcommandConfig(const CLI::App* app) : app_(app) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigTOML::from_config(input);
    const auto used = app_->get_subcommands();
    if (used.size() == 1) {
      for (auto& item : items)
        if (item.parents.empty()) item.parents = {used.front()->get_name()};
    }
    return items;
  }

 private:
  const CLI::App* app_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Statistical comparison of populations of rooted trees"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.set_config("--config", "", "Read flags from a TOML-style key=value file; command-line flags win");
  app.config_formatter(std::make_shared<SubcommandConfig>(&app));
  app.allow_config_extras(CLI::config_extras_mode::error);

  Common common;
  std::function<void()> action;

  // simulate-gw
  GWParams gw;
  std::size_t gw_n = 0;
  double gw_z = kDefaultZ;
  std::string gw_root = "always", gw_out;
  auto* sim = app.add_subcommand("simulate-gw", "Draw a sample of binomial Galton-Watson trees");
  sim->add_option("--p", gw.p, "Child presence probability")->required()->check(CLI::Range(0.0, 1.0));
  sim->add_option("--n", gw_n, "Number of trees")->required()->check(CLI::PositiveNumber);
  sim->add_option("--depth", gw.max_depth, "Maximum generation, root included")->check(CLI::PositiveNumber);
  sim->add_option("--z", gw_z, "Weight base stored in the file header")->check(CLI::PositiveNumber);
  sim->add_option("--root-rule", gw_root, "Root always present, or present with probability p")
      ->check(CLI::IsMember({"always", "bernoulli"}));
  sim->add_option("--out", gw_out, "Output sample file (stdout when omitted)");
  add_seed(sim, common);
  sim->callback([&] {
    action = [&] {
      gw.seed = resolve_seed(common.seed);
      gw.root = parse_root_rule(gw_root);
      gw.validate();
      const auto sample = sample_gw_sample(gw, gw_n, gw_z);
      std::ostringstream prov;
      prov << "simulate-gw p=" << format_double(gw.p) << " n=" << gw_n << " depth=" << gw.max_depth
           << " seed=" << gw.seed << " root=" << gw_root;
      emit(gw_out, sample_text({sample, default_ids(gw_n), "", prov.str()}));
    };
  });

  // mean-tree
  std::string mean_in, mean_rule = "both", mean_out;
  auto* mean = app.add_subcommand("mean-tree", "Majority-vote empirical mean tree(s) of a sample");
  mean->add_option("--sample", mean_in, "Sample file")->required();
  mean->add_option("--tie-rule", mean_rule, "Which mean to report")->check(CLI::IsMember({"both", "maximal", "minimal"}));
  mean->add_option("--out", mean_out, "Output file (stdout when omitted)");
  mean->add_flag("--json", common.json, "Emit JSON instead of the sample format");
  mean->callback([&] {
    action = [&] {
      const auto file = read_sample_file(mean_in);
      const auto pair = empirical_mean(file.sample);
      const auto glyphs = file.glyphs();
      std::vector<std::string> ids;
      std::vector<Tree> trees;
      if (mean_rule != "maximal") ids.push_back("minimal"), trees.push_back(pair.minimal);
      if (mean_rule != "minimal") ids.push_back("maximal"), trees.push_back(pair.maximal);
      if (common.json) {
        Json j;
        for (std::size_t i = 0; i < ids.size(); ++i) j[ids[i]] = tree_json(trees[i], glyphs);
        j["mean_distance"] = mean_distance_to(file.sample, trees.back());
        emit(mean_out, j.dump(2) + "\n");
      } else {
        emit(mean_out, sample_text({TreeSample(trees, file.sample.config()), ids, file.alphabet,
                                    "mean-tree of " + stem(mean_in) + " n=" + std::to_string(file.sample.size())}));
      }
    };
  });

  // distance
  std::string dist_a, dist_b;
  std::vector<std::size_t> dist_index{0, 0};
  auto* dist = app.add_subcommand("distance", "Distance between two trees taken from sample files");
  dist->add_option("--a", dist_a, "First sample file")->required();
  dist->add_option("--b", dist_b, "Second sample file")->required();
  dist->add_option("--index", dist_index, "Record indices into --a and --b")->expected(2);
  dist->add_flag("--json", common.json, "Emit JSON");
  dist->callback([&] {
    action = [&] {
      const auto a = read_sample_file(dist_a);
      const auto b = read_sample_file(dist_b);
      require_config(b, a.sample.config());
      if (dist_index[0] >= a.sample.size() || dist_index[1] >= b.sample.size()) {
        throw InvalidArgument("record index out of range");
      }
      const double d = distance(a.sample[dist_index[0]], b.sample[dist_index[1]], a.sample.config());
      std::ostringstream os;
      if (common.json) {
        Json j;
        j["distance"] = d;
        os << j.dump(2) << '\n';
      } else {
        os << std::setprecision(12) << d << '\n';
      }
      emit("", os.str());
    };
  });

  // test
  std::string t_s1, t_s2, t_out, t_rule = "maximal";
  TestConfig tcfg;
  bool t_null = false;
  auto* test = app.add_subcommand("test", "Two-sample permutation test between sample files");
  test->add_option("--sample1", t_s1, "First sample file")->required();
  test->add_option("--sample2", t_s2, "Second sample file")->required();
  test->add_option("--N", tcfg.num_permutations, "Number of random re-splits")->check(CLI::PositiveNumber);
  test->add_option("--alpha", tcfg.alphas, "Significance levels")->check(CLI::Range(0.0, 1.0));
  test->add_option("--tie-rule", t_rule, "Mean tree used for even sample sizes")->check(CLI::IsMember({"maximal", "minimal"}));
  test->add_option("--out", t_out, "JSON output file (stdout when omitted)");
  test->add_flag("--include-null", t_null, "Include the null distances in the JSON");
  add_seed(test, common);
  add_threads(test, common);
  test->callback([&] {
    action = [&] {
      tcfg.seed = resolve_seed(common.seed);
      tcfg.threads = common.threads;
      tcfg.tie_rule = parse_tie_rule(t_rule);
      tcfg.validate();
      const auto a = read_sample_file(t_s1);
      const auto b = read_sample_file(t_s2);
      require_config(b, a.sample.config());
      std::ostringstream os;
      write_test_result(os, run_test(a.sample, b.sample, tcfg), t_null);
      emit(t_out, os.str());
    };
  });

  // power
  double pw_p = 0.5, pw_pstar = 0.5, pw_z = kDefaultZ;
  std::vector<std::size_t> pw_n{31, 51, 101, 151, 201};
  std::size_t pw_tests = 1000, pw_depth = 12;
  std::string pw_mode = "mixture", pw_root = "always", pw_rule = "maximal", pw_out;
  TestConfig pcfg;
  auto* power = app.add_subcommand("power", "Rejection percentages between two Galton-Watson laws");
  power->add_option("--p", pw_p, "Parameter of the first law")->check(CLI::Range(0.0, 1.0));
  power->add_option("--pstar", pw_pstar, "Parameter of the second law")->required()->check(CLI::Range(0.0, 1.0));
  power->add_option("--n", pw_n, "Sample sizes (one column each)")->check(CLI::PositiveNumber);
  power->add_option("--tests", pw_tests, "Experiments per sample size")->check(CLI::PositiveNumber);
  power->add_option("--N", pcfg.num_permutations, "Null replicates per experiment")->check(CLI::PositiveNumber);
  power->add_option("--alpha", pcfg.alphas, "Significance levels (one row each)")->check(CLI::Range(0.0, 1.0));
  power->add_option("--depth", pw_depth, "Maximum generation of simulated trees")->check(CLI::PositiveNumber);
  power->add_option("--z", pw_z, "Weight base")->check(CLI::PositiveNumber);
  power->add_option("--null-mode", pw_mode, "Null construction")->check(CLI::IsMember({"mixture", "permute"}));
  power->add_option("--mixture-weight", pcfg.mixture_weight, "Weight of the first law in the mixture null")
      ->check(CLI::Range(0.0, 1.0));
  power->add_option("--root-rule", pw_root, "Root always present, or present with probability p")
      ->check(CLI::IsMember({"always", "bernoulli"}));
  power->add_option("--tie-rule", pw_rule, "Mean tree used for even sample sizes")->check(CLI::IsMember({"maximal", "minimal"}));
  power->add_option("--out", pw_out, "Output file (stdout when omitted)");
  power->add_flag("--json", common.json, "Emit JSON instead of CSV");
  add_seed(power, common);
  add_threads(power, common);
  power->callback([&] {
    action = [&] {
      pcfg.seed = resolve_seed(common.seed);
      pcfg.threads = common.threads;
      pcfg.null_mode = parse_null_mode(pw_mode);
      pcfg.tie_rule = parse_tie_rule(pw_rule);
      pcfg.validate();
      const auto root = parse_root_rule(pw_root);
      WeightConfig(2, pw_z, pw_depth);
      std::vector<PowerResult> columns;
      for (auto n : pw_n) columns.push_back(power_study(pw_p, pw_pstar, n, pcfg, pw_tests, pw_depth, pw_z, root));
      std::ostringstream os;
      if (common.json) {
        Json j;
        j["p"] = pw_p;
        j["pstar"] = pw_pstar;
        j["tests"] = pw_tests;
        Json rows = Json::object();
        for (const auto& [a, unused] : columns.front().rejection_percent) {
          Json row = Json::object();
          for (std::size_t c = 0; c < pw_n.size(); ++c) row[std::to_string(pw_n[c])] = columns[c].rejection_percent.at(a);
          rows[format_alpha(a)] = row;
        }
        j["rejection_percent"] = rows;
        os << j.dump(2) << '\n';
      } else {
        os << "alpha";
        for (auto n : pw_n) os << ",n=" << n;
        os << '\n';
        for (const auto& [a, unused] : columns.front().rejection_percent) {
          os << format_alpha(a);
          for (const auto& col : columns) os << ',' << format_double(col.rejection_percent.at(a));
          os << '\n';
        }
      }
      emit(pw_out, os.str());
    };
  });

  // pst
  std::string pst_fasta, pst_out;
  PSTParams pst_params;
  pst_params.max_context_length = 3;
  double pst_z = kDefaultZ;
  bool pst_skip = false;
  auto* pst = app.add_subcommand("pst", "Estimate one context tree per FASTA protein record");
  pst->add_option("--fasta", pst_fasta, "FASTA input")->required();
  pst->add_option("--L", pst_params.max_context_length, "Maximum context length")->check(CLI::PositiveNumber);
  pst->add_option("--p-min", pst_params.p_min, "Minimum context frequency")->check(CLI::Range(0.0, 1.0));
  pst->add_option("--r", pst_params.r, "Conditional ratio threshold (> 1)");
  pst->add_option("--gamma-min", pst_params.gamma_min, "Minimum conditional probability")->check(CLI::Range(0.0, 1.0));
  pst->add_option("--alpha-s", pst_params.alpha_s, "Smoothing pseudo-count")->check(CLI::NonNegativeNumber);
  pst->add_option("--z", pst_z, "Weight base stored in the file header")->check(CLI::PositiveNumber);
  pst->add_flag("--skip-unknown", pst_skip, "Drop records with non-standard residues instead of failing");
  pst->add_option("--out", pst_out, "Output sample file (stdout when omitted)");
  pst->callback([&] {
    action = [&] {
      pst_params.validate();
      const auto result = trees_from_fasta(pst_fasta, pst_params, pst_skip, pst_z);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      std::ostringstream prov;
      prov << "pst " << stem(pst_fasta) << " L=" << pst_params.max_context_length << " p_min=" << format_double(pst_params.p_min)
           << " r=" << format_double(pst_params.r) << " gamma_min=" << format_double(pst_params.gamma_min)
           << " alpha_s=" << format_double(pst_params.alpha_s);
      emit(pst_out, sample_text({result.sample, result.ids, std::string(kAminoAcids), prov.str()}));
    };
  });

  // pairwise
  std::vector<std::string> pw_samples;
  double overall_alpha = 0.05;
  bool no_diagonal = false;
  std::string pair_out, pair_rule = "maximal";
  TestConfig qcfg;
  auto* pair = app.add_subcommand("pairwise", "Bonferroni-corrected pairwise tests between families");
  pair->add_option("--samples", pw_samples, "Sample files, one per family")->required()->expected(2, -1);
  pair->add_option("--overall-alpha", overall_alpha, "Family-wise significance level")->check(CLI::Range(0.0, 1.0));
  pair->add_option("--N", qcfg.num_permutations, "Number of random re-splits per test")->check(CLI::PositiveNumber);
  pair->add_option("--tie-rule", pair_rule, "Mean tree used for even sample sizes")->check(CLI::IsMember({"maximal", "minimal"}));
  pair->add_flag("--no-diagonal", no_diagonal, "Skip the split-half null check of each family");
  pair->add_option("--out", pair_out, "Also write the JSON matrix to this file");
  pair->add_flag("--json", common.json, "Print the JSON matrix instead of the table");
  add_seed(pair, common);
  add_threads(pair, common);
  pair->callback([&] {
    action = [&] {
      qcfg.seed = resolve_seed(common.seed);
      qcfg.threads = common.threads;
      qcfg.tie_rule = parse_tie_rule(pair_rule);
      qcfg.validate();
      std::vector<TreeSample> samples;
      std::vector<std::string> names;
      for (const auto& path : pw_samples) {
        auto f = read_sample_file(path);
        if (!samples.empty()) require_config(f, samples.front().config());
        samples.push_back(std::move(f.sample));
        names.push_back(stem(path));
      }
      const auto result = pairwise_family_tests(samples, names, qcfg, overall_alpha, !no_diagonal);
      const std::string json = to_json(result, false).dump(2) + "\n";
      if (!pair_out.empty()) emit(pair_out, json);
      emit("", common.json ? json : render_pairwise_table(result));
    };
  });

  // --config may follow the subcommand; CLI11 reads config files only at the root.
  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
  for (std::size_t i = args.size(); i-- > 0;) {
    if (args[i] == "--config" && i > 0) {
      std::string value = args[i - 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i) - 1, args.begin() + static_cast<std::ptrdiff_t>(i) + 1);
      args.push_back(value);
      args.push_back("--config");
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      std::string opt = args[i];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
      args.push_back(opt);
      break;
    }
  }

  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    action();
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return 0;
}

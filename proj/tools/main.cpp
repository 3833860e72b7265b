#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>

#include "gonsel/annotations.hpp"
#include "gonsel/cache.hpp"
#include "gonsel/evaluation.hpp"
#include "gonsel/evolution.hpp"
#include "gonsel/io.hpp"
#include "gonsel/obo.hpp"
#include "gonsel/parallel.hpp"
#include "gonsel/selection.hpp"
#include "gonsel/similarity.hpp"
#include "gonsel/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gonsel;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitEmpty = 3;
constexpr int kExitParse = 4;

struct CommonOptions {
  std::string obo_path;
  std::string protein_map_path;
  std::vector<std::string> relations{"is_a", "part_of"};
  std::string evidence = "experimental";
  std::string branch = "all";
  std::string universe = "all";
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  unsigned threads = default_thread_count();
  bool use_cache = false;
  std::string cache_dir = ".gonsel-cache";
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool needs_obo = true) {
  cmd->set_config("--config", "",
                  "Flat key=value config file; command-line flags win");
  cmd->get_config_formatter_base()->valueSeparator('=');
  auto* obo = cmd->add_option("--obo", opt.obo_path, "GO structure file (OBO)")
                  ->envname("GONSEL_OBO")
                  ->check(CLI::ExistingFile);
  if (needs_obo) obo->required();
  cmd->add_option("--relations", opt.relations,
                  "OBO relations treated as edges")
      ->delimiter(',')
      ->envname("GONSEL_RELATIONS");
  cmd->add_option("--evidence", opt.evidence,
                  "'experimental', 'all', or comma-separated GAF codes")
      ->envname("GONSEL_EVIDENCE");
  cmd->add_option("--protein-map", opt.protein_map_path,
                  "Two-column protein-ID synonym file applied to GAF rows")
      ->check(CLI::ExistingFile)
      ->envname("GONSEL_PROTEIN_MAP");
  cmd->add_option("--threads", opt.threads, "Worker threads")
      ->envname("GONSEL_THREADS");
  cmd->add_option("--seed", opt.seed, "Seed for every random component")
      ->envname("GONSEL_SEED");
  cmd->add_flag("--cache,!--no-cache", opt.use_cache,
                "Cache parsed DAGs and similarity matrices")
      ->envname("GONSEL_CACHE");
  cmd->add_option("--cache-dir", opt.cache_dir, "Cache directory")
      ->envname("GONSEL_CACHE_DIR");
}

GafConfig gaf_config(const CommonOptions& opt, const std::string& path,
                     const std::string& label_override) {
  GafConfig config;
  config.label = label_override.empty() ? fs::path(path).filename().string()
                                        : label_override;
  if (!opt.protein_map_path.empty()) {
    std::istringstream in(read_file(opt.protein_map_path));
    config.protein_synonyms = parse_protein_synonyms(in);
  }
  if (opt.evidence == "experimental") {
    config.evidence_filter = experimental_evidence_codes();
  } else if (opt.evidence == "all") {
    config.accept_all_evidence = true;
  } else {
    config.evidence_filter.clear();
    for (const auto code : split(opt.evidence, ','))
      if (!code.empty()) config.evidence_filter.insert(std::string(code));
    if (config.evidence_filter.empty())
      throw CLI::ValidationError("--evidence", "no evidence codes given");
  }
  return config;
}

OboConfig obo_config(const CommonOptions& opt) {
  OboConfig config;
  config.edge_relations.clear();
  for (const std::string& r : opt.relations) config.edge_relations.insert(r);
  if (config.edge_relations.empty())
    throw CLI::ValidationError("--relations", "no edge relations given");
  return config;
}

std::vector<Branch> branch_filter(const std::string& tag) {
  if (tag == "all") return {Branch::BP, Branch::MF, Branch::CC};
  const auto branch = branch_from_tag(tag);
  if (!branch)
    throw CLI::ValidationError("--branch", "expected BP, MF, CC or all");
  return {*branch};
}

TermUniverse universe_of(const std::string& tag) {
  if (tag == "all") return TermUniverse::AllBranchTerms;
  if (tag == "annotated") return TermUniverse::AnnotatedOnly;
  throw CLI::ValidationError("--universe", "expected 'all' or 'annotated'");
}

std::string relations_key(const OboConfig& config) {
  std::string key;
  for (const auto& r : config.edge_relations) key += r + ",";
  return key;
}

std::shared_ptr<const OntologyDag> load_dag(const CommonOptions& opt,
                                            OboStats* stats = nullptr) {
  const OboConfig config = obo_config(opt);
  const std::string bytes = read_file(opt.obo_path);
  if (opt.use_cache) {
    const std::string key = content_hash(bytes + "|" + relations_key(config));
    const fs::path cached = fs::path(opt.cache_dir) / ("dag-" + key + ".bin");
    if (fs::exists(cached)) {
      std::ifstream in(cached, std::ios::binary);
      return read_dag_cache(in);
    }
    std::istringstream in(bytes);
    OboResult result = parse_obo(in, config);
    if (stats) *stats = result.stats;
    fs::create_directories(opt.cache_dir);
    std::ofstream out(cached, std::ios::binary);
    write_dag_cache(out, *result.dag);
    return result.dag;
  }
  std::istringstream in(bytes);
  OboResult result = parse_obo(in, config);
  if (stats) *stats = result.stats;
  return result.dag;
}

AnnotationRelease load_release(const CommonOptions& opt,
                               std::shared_ptr<const OntologyDag> dag,
                               const std::string& path,
                               const std::string& label = "") {
  std::istringstream in(read_file(path));
  AnnotationRelease release =
      parse_gaf(in, std::move(dag), gaf_config(opt, path, label));
  if (release.stats().skipped_unknown_term > 0)
    std::cerr << "gonsel: warning: " << release.label() << ": "
              << release.stats().skipped_unknown_term
              << " rows referenced unknown or obsolete terms\n";
  return release;
}

SimilarityMatrix load_matrix(const CommonOptions& opt, Measure measure,
                             const AnnotationRelease& release, Branch branch,
                             TermUniverse universe,
                             const std::string& gaf_path) {
  if (opt.use_cache) {
    const std::string key = content_hash(
        content_hash(read_file(opt.obo_path)) + "|" +
        content_hash(read_file(gaf_path)) + "|" + relations_key(obo_config(opt)) +
        "|" + opt.evidence + "|" + std::string(to_string(measure)) + "|" +
        std::string(to_string(branch)) + "|" + opt.universe);
    const fs::path cached = fs::path(opt.cache_dir) / ("sim-" + key + ".bin");
    if (fs::exists(cached)) {
      std::ifstream in(cached, std::ios::binary);
      return read_matrix_cache(in, release.dag());
    }
    SimilarityMatrix matrix =
        build_similarity_matrix(measure, release, branch, universe, opt.threads);
    fs::create_directories(opt.cache_dir);
    std::ofstream out(cached, std::ios::binary);
    write_matrix_cache(out, matrix);
    return matrix;
  }
  return build_similarity_matrix(measure, release, branch, universe,
                                 opt.threads);
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

json summary_json(const DistributionSummary& s) {
  return json{{"min", s.min}, {"q1", s.q1},     {"median", s.median},
              {"q3", s.q3},   {"max", s.max},   {"mean", s.mean},
              {"n", s.n}};
}

json config_echo(const CommonOptions& opt) {
  return json{{"evidence", opt.evidence},
              {"relations", opt.relations},
              {"seed", opt.seed},
              {"universe", opt.universe}};
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeOptions {
  CommonOptions common;
  std::string gaf_old, gaf_new;
  std::string label_old, label_new;
  std::string measure = "jaccard";
  bool svg = false;
};

int cmd_analyze(const AnalyzeOptions& opt) {
  const auto branches = branch_filter(opt.common.branch);
  const auto universe = universe_of(opt.common.universe);
  const auto measure = measure_from_tag(opt.measure);
  if (!measure)
    throw CLI::ValidationError("--measure", "expected 'jaccard' or 'lin'");

  auto dag = load_dag(opt.common);
  const AnnotationRelease older =
      load_release(opt.common, dag, opt.gaf_old, opt.label_old);
  const AnnotationRelease newer =
      load_release(opt.common, dag, opt.gaf_new, opt.label_new);
  if (older.empty())
    std::cerr << "gonsel: warning: old release has no annotations\n";
  if (newer.empty())
    std::cerr << "gonsel: warning: new release has no annotations\n";

  auto records = categorize_novelty(older, newer);
  // Keep only novel terms in the requested branches.
  std::erase_if(records, [&](const CategoryRecord& r) {
    return std::find(branches.begin(), branches.end(),
                     dag->branch_of(r.new_term)) == branches.end();
  });
  if (records.empty())
    throw EmptyResultError("no novel annotations between " + older.label() +
                           " and " + newer.label() +
                           " in the selected branches");

  std::vector<SimilarityMatrix> matrices;
  for (const Branch branch : branches) {
    if (dag->branch_size(branch) == 0) continue;
    try {
      matrices.push_back(load_matrix(opt.common, *measure, older, branch,
                                     universe, opt.gaf_old));
    } catch (const DomainError&) {
      // Annotated-only universe with nothing annotated in this branch; its
      // pairs simply go unranked.
    }
  }

  std::optional<RankAnalysis> ranks;
  try {
    ranks = rank_analysis(records, matrices, *dag);
  } catch (const DomainError&) {
    // All novelty is First or cross-branch; ranks stay empty.
  }
  const ForkAnalysis forks = fork_analysis(records, *dag);
  const auto proportions = category_proportions(records, *dag);

  const fs::path dir(opt.common.out_dir);
  {
    auto out = open_output(dir / "categories.csv");
    write_categories_csv(out, records, *dag);
  }
  {
    auto out = open_output(dir / "ranks.csv");
    if (ranks) write_ranks_csv(out, *ranks, *dag);
    else out << "branch,term,protein,old_term,rank\n";
  }
  {
    auto out = open_output(dir / "forks.csv");
    write_forks_csv(out, forks, *dag);
  }

  json summary;
  summary["config"] = config_echo(opt.common);
  summary["config"]["measure"] = opt.measure;
  summary["config"]["branch"] = opt.common.branch;
  summary["releases"] = {{"old", older.label()}, {"new", newer.label()}};

  // Table-1 style totals on direct novelty.
  json novelty_totals;
  for (const Branch branch : branches) {
    std::size_t annotations = 0;
    std::set<std::string> proteins;
    for (const NoveltySet& set : novelty(older, newer, NoveltyMode::Direct)) {
      if (dag->branch_of(set.term) != branch) continue;
      annotations += set.proteins.size();
      proteins.insert(set.proteins.begin(), set.proteins.end());
    }
    novelty_totals[std::string(to_string(branch))] = {
        {"proteins", proteins.size()}, {"novel_annotations", annotations}};
  }
  summary["novelty"] = novelty_totals;

  json categories;
  for (const auto& [branch, stats] : proportions) {
    json entry;
    for (std::size_t c = 0; c < kCategoryCount; ++c) {
      const std::string name{to_string(Category(c))};
      entry["pair_proportions"][name] = stats.pair_proportions[c];
      entry["protein_counts"][name] = stats.protein_counts[c];
    }
    entry["terms"] = stats.terms;
    categories[std::string(to_string(branch))] = entry;
  }
  summary["categories"] = categories;

  if (ranks) {
    json ranks_json;
    for (const auto& [branch, s] : ranks->summaries)
      ranks_json[std::string(to_string(branch))] = summary_json(s);
    summary["ranks"] = ranks_json;
  } else {
    summary["ranks"] = json::object();
  }

  json forks_json;
  auto fork_section = [&](const std::map<Branch, DistributionSummary>& m) {
    json section;
    for (const auto& [branch, s] : m)
      section[std::string(to_string(branch))] = summary_json(s);
    return section;
  };
  forks_json["sib"] = fork_section(forks.sib);
  forks_json["other"] = fork_section(forks.other);
  forks_json["all"] = fork_section(forks.all);
  summary["forks"] = forks_json;

  {
    auto out = open_output(dir / "summary.json");
    out << summary.dump(2) << '\n';
  }

  if (opt.svg) {
    if (ranks) {
      std::vector<BoxplotSeries> series;
      for (const auto& [branch, s] : ranks->summaries)
        series.push_back({std::string(to_string(branch)), s});
      auto out = open_output(dir / "ranks_boxplot.svg");
      write_boxplot_svg(out, "Similarity rank of old terms (" + opt.measure + ")",
                        series, 0.0, 1.0);
    }
    if (!forks.all.empty()) {
      std::vector<BoxplotSeries> series;
      double top = 1.0;
      for (const auto& [branch, s] : forks.all) {
        series.push_back({std::string(to_string(branch)), s});
        top = std::max(top, s.max);
      }
      auto out = open_output(dir / "forks_boxplot.svg");
      write_boxplot_svg(out, "Fork distance to the old term", series, 0.0, top);
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// select

struct SelectOptions {
  CommonOptions common;
  std::string gaf_old;
  std::string method = "random";
  std::size_t budget = 0;
  double k_quantile = -1.0;
  bool tune = false;
  std::vector<double> k_grid{0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
  double mask_fraction = 0.1;
  std::size_t tune_repeats = 1;
  std::size_t tune_budget = 0;
  std::vector<std::string> terms;
  std::string out_file = "negatives.csv";
};

int cmd_select(const SelectOptions& opt) {
  const auto method = method_from_tag(opt.method);
  if (!method)
    throw CLI::ValidationError("--method",
                               "expected one of nsfs-j, nsfs-l, sibling, "
                               "noancdesc, snob, random");
  const auto branches = branch_filter(opt.common.branch);
  if (branches.size() != 1)
    throw CLI::ValidationError("--branch", "select needs a single branch");
  const Branch branch = branches.front();
  const auto universe = universe_of(opt.common.universe);
  if (is_nsfs(*method) && opt.k_quantile < 0 && !opt.tune)
    throw CLI::ValidationError("--k",
                               "NSFS methods need --k or --tune-k");

  auto dag = load_dag(opt.common);
  const AnnotationRelease release = load_release(opt.common, dag, opt.gaf_old);
  if (release.empty())
    std::cerr << "gonsel: warning: release has no annotations\n";

  std::optional<SimilarityMatrix> matrix;
  double k_used = opt.k_quantile;
  if (is_nsfs(*method)) {
    const Measure measure = *method == SelectionMethod::NsfsJaccard
                                ? Measure::Jaccard
                                : Measure::Lin;
    matrix = load_matrix(opt.common, measure, release, branch, universe,
                         opt.gaf_old);
    if (opt.tune)
      k_used = tune_k(release, *matrix, opt.k_grid,
                      opt.tune_budget > 0 ? opt.tune_budget : opt.budget,
                      opt.common.seed, opt.mask_fraction, opt.tune_repeats,
                      opt.common.threads);
  }

  std::vector<TermIndex> targets;
  if (opt.terms.empty()) {
    targets = dag->terms_in_branch(branch);
  } else {
    for (const std::string& acc : opt.terms) {
      const TermIndex k = dag->index_of(acc);
      if (dag->branch_of(k) != branch)
        throw DomainError("term " + acc + " is not in branch " +
                          std::string(to_string(branch)));
      targets.push_back(k);
    }
  }

  SelectionConfig config;
  config.method = *method;
  config.budget = opt.budget;
  config.k_quantile = k_used;
  config.seed = opt.common.seed;

  std::vector<SelectionResult> results(targets.size());
  parallel_for(targets.size(), opt.common.threads, [&](std::size_t i) {
    results[i] = select(config, targets[i], release,
                        matrix ? &*matrix : nullptr);
  });

  auto out = open_output(fs::path(opt.out_file));
  out << "term,protein,source\n";
  for (const SelectionResult& result : results) {
    for (std::size_t i = 0; i < result.negatives.size(); ++i) {
      out << dag->accession(result.term) << ','
          << release.protein(result.negatives[i]) << ','
          << (i < result.n_heuristic ? "heuristic" : "fill") << '\n';
    }
  }
  if (is_nsfs(*method))
    std::cerr << "gonsel: " << opt.method << " used K=" << k_used << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateOptions {
  CommonOptions common;
  std::string gaf_old, gaf_new;
  std::string label_old, label_new;
  std::vector<std::string> methods{"nsfs-j", "nsfs-l", "sibling",
                                   "noancdesc", "snob", "random"};
  std::vector<std::size_t> budgets{500, 750, 1000, 1250, 1500};
  std::size_t repeats = 10;
  double k_quantile = -1.0;
  bool tune = false;
  std::vector<double> k_grid{0.5, 0.6, 0.7, 0.8, 0.9, 0.95};
  double mask_fraction = 0.1;
  std::size_t tune_repeats = 1;
  std::size_t tune_budget = 0;
  std::string fn_mode = "closed";
  bool plot = false;
};

int cmd_evaluate(const EvaluateOptions& opt) {
  BenchmarkConfig config;
  config.methods.clear();
  for (const std::string& tag : opt.methods) {
    const auto method = method_from_tag(tag);
    if (!method)
      throw CLI::ValidationError("--methods", "unknown method '" + tag + "'");
    config.methods.push_back(*method);
  }
  const bool has_nsfs =
      std::any_of(config.methods.begin(), config.methods.end(),
                  [](SelectionMethod m) { return is_nsfs(m); });
  if (has_nsfs && opt.k_quantile < 0 && !opt.tune)
    throw CLI::ValidationError("--k", "NSFS methods need --k or --tune-k");
  if (opt.k_quantile >= 0) {
    config.fixed_k[SelectionMethod::NsfsJaccard] = opt.k_quantile;
    config.fixed_k[SelectionMethod::NsfsLin] = opt.k_quantile;
  }
  config.budgets = opt.budgets;
  config.seed = opt.common.seed;
  config.repeats = opt.repeats;
  config.k_grid = opt.k_grid;
  config.mask_fraction = opt.mask_fraction;
  config.tune_repeats = opt.tune_repeats;
  config.tune_budget = opt.tune_budget;
  config.universe = universe_of(opt.common.universe);
  config.threads = opt.common.threads;
  if (opt.fn_mode == "closed") config.fn_mode = NoveltyMode::Closed;
  else if (opt.fn_mode == "direct") config.fn_mode = NoveltyMode::Direct;
  else throw CLI::ValidationError("--fn-mode", "expected 'closed' or 'direct'");

  auto dag = load_dag(opt.common);
  const AnnotationRelease older =
      load_release(opt.common, dag, opt.gaf_old, opt.label_old);
  const AnnotationRelease newer =
      load_release(opt.common, dag, opt.gaf_new, opt.label_new);

  const EvaluationReport report =
      run_benchmark(older, newer, branch_filter(opt.common.branch), config);

  const fs::path dir(opt.common.out_dir);
  {
    auto out = open_output(dir / "fn_per_term.csv");
    out << "branch,method,budget,term,fn\n";
    for (const BranchReport& br : report.branches) {
      for (const MethodCell& cell : br.cells) {
        for (std::size_t ti = 0; ti < br.terms.size(); ++ti) {
          out << to_string(br.branch) << ',' << to_string(cell.method) << ','
              << cell.budget << ',' << dag->accession(br.terms[ti]) << ','
              << format_double(cell.fn_per_term[ti]) << '\n';
        }
      }
    }
  }

  json doc;
  doc["config"] = config_echo(opt.common);
  doc["config"]["methods"] = opt.methods;
  doc["config"]["budgets"] = opt.budgets;
  doc["config"]["repeats"] = opt.repeats;
  doc["config"]["fn_mode"] = opt.fn_mode;
  doc["config"]["branch"] = opt.common.branch;
  doc["releases"] = {{"old", report.older_label}, {"new", report.newer_label}};
  json k_used;
  for (const auto& [method, per_branch] : report.k_used) {
    json entry;
    for (const auto& [branch, k] : per_branch)
      entry[std::string(to_string(branch))] = k;
    k_used[std::string(to_string(method))] = entry;
  }
  doc["k_used"] = k_used;

  json branches_json;
  for (const BranchReport& br : report.branches) {
    json entry;
    entry["eligible_terms"] = br.terms.size();
    json means;
    for (const MethodCell& cell : br.cells)
      means[std::string(to_string(cell.method))]
           [std::to_string(cell.budget)] = cell.mean_fn;
    entry["mean_fn"] = means;
    json tests;
    for (const auto& [budget, pairs] : br.wilcoxon) {
      json list = json::array();
      for (const PairwiseTest& t : pairs) {
        list.push_back({{"a", std::string(to_string(t.a))},
                        {"b", std::string(to_string(t.b))},
                        {"p_value", t.p_value},
                        {"computed", t.computed},
                        {"degenerate", t.degenerate}});
      }
      tests[std::to_string(budget)] = list;
    }
    entry["wilcoxon"] = tests;
    branches_json[std::string(to_string(br.branch))] = entry;
  }
  doc["branches"] = branches_json;

  {
    auto out = open_output(dir / "report.json");
    out << doc.dump(2) << '\n';
  }

  if (opt.plot) {
    auto out = open_output(dir / "fig5_data.csv");
    out << "branch,method,budget,mean_fn\n";
    for (const BranchReport& br : report.branches)
      for (const MethodCell& cell : br.cells)
        out << to_string(br.branch) << ',' << to_string(cell.method) << ','
            << cell.budget << ',' << format_double(cell.mean_fn) << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// similarity

struct SimilarityOptions {
  CommonOptions common;
  std::string gaf_old;
  std::string measure = "jaccard";
  std::string format = "bin";
  std::string out_file = "similarity.bin";
};

int cmd_similarity(const SimilarityOptions& opt) {
  const auto measure = measure_from_tag(opt.measure);
  if (!measure)
    throw CLI::ValidationError("--measure", "expected 'jaccard' or 'lin'");
  const auto branches = branch_filter(opt.common.branch);
  if (branches.size() != 1)
    throw CLI::ValidationError("--branch", "similarity needs a single branch");
  if (opt.format != "bin" && opt.format != "csv")
    throw CLI::ValidationError("--format", "expected 'bin' or 'csv'");

  auto dag = load_dag(opt.common);
  const AnnotationRelease release = load_release(opt.common, dag, opt.gaf_old);
  const SimilarityMatrix matrix =
      load_matrix(opt.common, *measure, release, branches.front(),
                  universe_of(opt.common.universe), opt.gaf_old);
  auto out = open_output(fs::path(opt.out_file));
  if (opt.format == "bin") write_matrix_cache(out, matrix);
  else write_matrix_csv(out, matrix, *dag);
  std::cerr << "gonsel: wrote " << matrix.size() << "x" << matrix.size()
            << " " << opt.measure << " matrix\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// parse-check

struct ParseCheckOptions {
  CommonOptions common;
  std::string gaf_old, gaf_new;
  std::string label_old, label_new;
};

int cmd_parse_check(const ParseCheckOptions& opt) {
  OboStats stats;
  auto dag = load_dag(opt.common, &stats);
  std::cout << "ontology: terms=" << dag->term_count()
            << " BP=" << dag->branch_size(Branch::BP)
            << " MF=" << dag->branch_size(Branch::MF)
            << " CC=" << dag->branch_size(Branch::CC)
            << " obsolete=" << stats.terms_obsolete
            << " edges=" << stats.edges_kept
            << " cross_branch_dropped=" << stats.edges_cross_branch
            << " alt_ids=" << stats.alt_ids
            << " max_level=" << dag->max_level() << "\n";
  if (opt.gaf_old.empty()) return kExitOk;

  const AnnotationRelease older =
      load_release(opt.common, dag, opt.gaf_old, opt.label_old);
  auto print_release = [](const AnnotationRelease& r) {
    std::cout << "release " << r.label() << ": proteins=" << r.protein_count()
              << " direct_pairs=" << r.direct().pair_count()
              << " skipped_not=" << r.stats().skipped_not
              << " skipped_evidence=" << r.stats().skipped_evidence
              << " skipped_unknown_term=" << r.stats().skipped_unknown_term
              << " duplicates=" << r.stats().duplicates << "\n";
  };
  print_release(older);
  if (opt.gaf_new.empty()) return kExitOk;

  const AnnotationRelease newer =
      load_release(opt.common, dag, opt.gaf_new, opt.label_new);
  print_release(newer);

  for (const Branch branch : {Branch::CC, Branch::MF, Branch::BP}) {
    std::size_t annotations = 0;
    std::set<std::string> proteins;
    for (const NoveltySet& set : novelty(older, newer, NoveltyMode::Direct)) {
      if (dag->branch_of(set.term) != branch) continue;
      annotations += set.proteins.size();
      proteins.insert(set.proteins.begin(), set.proteins.end());
    }
    std::cout << "novelty " << to_string(branch)
              << ": proteins=" << proteins.size()
              << " novel_annotations=" << annotations << "\n";
  }
  for (const Branch branch : {Branch::CC, Branch::MF, Branch::BP}) {
    std::cout << "eligible " << to_string(branch) << ": "
              << eligible_terms(older, newer, branch).size() << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GO annotation-evolution analysis and negative-example "
               "selection toolkit"};
  app.require_subcommand(1);

  AnalyzeOptions analyze;
  auto* analyze_cmd = app.add_subcommand(
      "analyze", "Categorize novel annotations, similarity ranks, forks");
  add_common(analyze_cmd, analyze.common);
  analyze_cmd->add_option("--gaf-old", analyze.gaf_old, "Older GAF release")
      ->required()->check(CLI::ExistingFile)->envname("GONSEL_GAF_OLD");
  analyze_cmd->add_option("--gaf-new", analyze.gaf_new, "Newer GAF release")
      ->required()->check(CLI::ExistingFile)->envname("GONSEL_GAF_NEW");
  analyze_cmd->add_option("--label-old", analyze.label_old, "Label override");
  analyze_cmd->add_option("--label-new", analyze.label_new, "Label override");
  analyze_cmd->add_option("--branch", analyze.common.branch, "BP|MF|CC|all")
      ->envname("GONSEL_BRANCH");
  analyze_cmd->add_option("--measure", analyze.measure,
                          "Similarity measure for ranks: jaccard|lin")
      ->envname("GONSEL_MEASURE");
  analyze_cmd->add_option("--universe", analyze.common.universe,
                          "Matrix term universe: all|annotated");
  analyze_cmd->add_option("--out", analyze.common.out_dir, "Output directory")
      ->envname("GONSEL_OUT");
  analyze_cmd->add_flag("--svg", analyze.svg, "Also emit SVG boxplots");

  SelectOptions select_opt;
  auto* select_cmd = app.add_subcommand(
      "select", "Select negative examples for every term of a branch");
  add_common(select_cmd, select_opt.common);
  select_cmd->add_option("--gaf", select_opt.gaf_old, "Annotation release")
      ->required()->check(CLI::ExistingFile)->envname("GONSEL_GAF");
  select_cmd->add_option("--branch", select_opt.common.branch, "BP|MF|CC")
      ->required()->envname("GONSEL_BRANCH");
  select_cmd->add_option("--method", select_opt.method,
                         "nsfs-j|nsfs-l|sibling|noancdesc|snob|random")
      ->required()->envname("GONSEL_METHOD");
  select_cmd->add_option("--budget", select_opt.budget, "Negatives per term")
      ->required()->check(CLI::PositiveNumber)->envname("GONSEL_BUDGET");
  select_cmd->add_option("--k", select_opt.k_quantile,
                         "NSFS similarity quantile in (0,1)")
      ->envname("GONSEL_K");
  select_cmd->add_flag("--tune-k", select_opt.tune,
                       "Tune K by internal masking holdout");
  select_cmd->add_option("--k-grid", select_opt.k_grid, "Grid for --tune-k")
      ->delimiter(',');
  select_cmd->add_option("--mask-fraction", select_opt.mask_fraction,
                         "Masked fraction for --tune-k");
  select_cmd->add_option("--tune-repeats", select_opt.tune_repeats,
                         "Mask redraws for --tune-k");
  select_cmd->add_option("--tune-budget", select_opt.tune_budget,
                         "Budget used while tuning (default --budget)");
  select_cmd->add_option("--terms", select_opt.terms,
                         "Restrict to these GO accessions")
      ->delimiter(',');
  select_cmd->add_option("--universe", select_opt.common.universe,
                         "Matrix term universe: all|annotated");
  select_cmd->add_option("--out", select_opt.out_file, "Output CSV path")
      ->envname("GONSEL_OUT");

  EvaluateOptions evaluate;
  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "Temporal-holdout benchmark of selection methods");
  add_common(evaluate_cmd, evaluate.common);
  evaluate_cmd->add_option("--gaf-old", evaluate.gaf_old, "Older GAF release")
      ->required()->check(CLI::ExistingFile)->envname("GONSEL_GAF_OLD");
  evaluate_cmd->add_option("--gaf-new", evaluate.gaf_new, "Newer GAF release")
      ->required()->check(CLI::ExistingFile)->envname("GONSEL_GAF_NEW");
  evaluate_cmd->add_option("--label-old", evaluate.label_old, "Label override");
  evaluate_cmd->add_option("--label-new", evaluate.label_new, "Label override");
  evaluate_cmd->add_option("--branch", evaluate.common.branch, "BP|MF|CC|all")
      ->envname("GONSEL_BRANCH");
  evaluate_cmd->add_option("--methods", evaluate.methods, "Methods to compare")
      ->delimiter(',')->envname("GONSEL_METHODS");
  evaluate_cmd->add_option("--budgets", evaluate.budgets, "Budgets to sweep")
      ->delimiter(',')->envname("GONSEL_BUDGETS");
  evaluate_cmd->add_option("--repeats", evaluate.repeats,
                           "Seeds averaged per random component")
      ->envname("GONSEL_REPEATS");
  evaluate_cmd->add_option("--k", evaluate.k_quantile,
                           "Fixed K for both NSFS variants")
      ->envname("GONSEL_K");
  evaluate_cmd->add_flag("--tune-k", evaluate.tune,
                         "Tune K by internal masking holdout");
  evaluate_cmd->add_option("--k-grid", evaluate.k_grid, "Grid for --tune-k")
      ->delimiter(',');
  evaluate_cmd->add_option("--mask-fraction", evaluate.mask_fraction,
                           "Masked fraction for --tune-k");
  evaluate_cmd->add_option("--tune-repeats", evaluate.tune_repeats,
                           "Mask redraws for --tune-k");
  evaluate_cmd->add_option("--tune-budget", evaluate.tune_budget,
                           "Budget used while tuning (default: smallest)");
  evaluate_cmd->add_option("--fn-mode", evaluate.fn_mode,
                           "False-negative labels: closed|direct");
  evaluate_cmd->add_option("--universe", evaluate.common.universe,
                           "Matrix term universe: all|annotated");
  evaluate_cmd->add_option("--out", evaluate.common.out_dir,
                           "Output directory")->envname("GONSEL_OUT");
  evaluate_cmd->add_flag("--plot", evaluate.plot,
                         "Also emit per-budget line-plot data");

  SimilarityOptions similarity;
  auto* similarity_cmd = app.add_subcommand(
      "similarity", "Build and export a term similarity matrix");
  add_common(similarity_cmd, similarity.common);
  similarity_cmd->add_option("--gaf", similarity.gaf_old, "Annotation release")
      ->required()->check(CLI::ExistingFile)->envname("GONSEL_GAF");
  similarity_cmd->add_option("--branch", similarity.common.branch, "BP|MF|CC")
      ->required()->envname("GONSEL_BRANCH");
  similarity_cmd->add_option("--measure", similarity.measure, "jaccard|lin")
      ->envname("GONSEL_MEASURE");
  similarity_cmd->add_option("--universe", similarity.common.universe,
                             "all|annotated");
  similarity_cmd->add_option("--format", similarity.format, "bin|csv");
  similarity_cmd->add_option("--out", similarity.out_file, "Output path")
      ->envname("GONSEL_OUT");

  ParseCheckOptions parse_check;
  auto* parse_check_cmd = app.add_subcommand(
      "parse-check", "Parse inputs and print structure/annotation stats");
  add_common(parse_check_cmd, parse_check.common);
  parse_check_cmd->add_option("--gaf", parse_check.gaf_old,
                              "Annotation release")
      ->check(CLI::ExistingFile)->envname("GONSEL_GAF");
  parse_check_cmd->add_option("--gaf-new", parse_check.gaf_new,
                              "Newer release for novelty counts")
      ->check(CLI::ExistingFile)->envname("GONSEL_GAF_NEW");
  parse_check_cmd->add_option("--label-old", parse_check.label_old, "Label");
  parse_check_cmd->add_option("--label-new", parse_check.label_new, "Label");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // CLI11 help/version exits are 0; anything else is a usage error.
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*analyze_cmd) return cmd_analyze(analyze);
    if (*select_cmd) return cmd_select(select_opt);
    if (*evaluate_cmd) return cmd_evaluate(evaluate);
    if (*similarity_cmd) return cmd_similarity(similarity);
    if (*parse_check_cmd) return cmd_parse_check(parse_check);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "gonsel: parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const StructuralError& e) {
    std::cerr << "gonsel: structural error: " << e.what() << "\n";
    return kExitParse;
  } catch (const EmptyResultError& e) {
    std::cerr << "gonsel: " << e.what() << "\n";
    return kExitEmpty;
  } catch (const std::exception& e) {
    std::cerr << "gonsel: error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}

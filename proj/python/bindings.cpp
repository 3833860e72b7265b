#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "gonsel/annotations.hpp"
#include "gonsel/evaluation.hpp"
#include "gonsel/evolution.hpp"
#include "gonsel/obo.hpp"
#include "gonsel/selection.hpp"
#include "gonsel/similarity.hpp"
#include "gonsel/stats.hpp"

namespace py = pybind11;
using namespace gonsel;

namespace {

Branch branch_arg(const std::string& tag) {
  const auto branch = branch_from_tag(tag);
  if (!branch) throw DomainError("unknown branch '" + tag + "'");
  return *branch;
}

Measure measure_arg(const std::string& tag) {
  const auto measure = measure_from_tag(tag);
  if (!measure) throw DomainError("unknown measure '" + tag + "'");
  return *measure;
}

SelectionMethod method_arg(const std::string& tag) {
  const auto method = method_from_tag(tag);
  if (!method) throw DomainError("unknown method '" + tag + "'");
  return *method;
}

OboConfig obo_config(const std::vector<std::string>& relations) {
  OboConfig config;
  config.edge_relations.clear();
  config.edge_relations.insert(relations.begin(), relations.end());
  return config;
}

GafConfig gaf_config(const std::vector<std::string>& evidence,
                     const std::string& label) {
  GafConfig config;
  config.label = label;
  if (evidence.size() == 1 && evidence[0] == "all") {
    config.accept_all_evidence = true;
  } else if (!evidence.empty()) {
    config.evidence_filter.clear();
    config.evidence_filter.insert(evidence.begin(), evidence.end());
  }
  return config;
}

struct PyOntology {
  std::shared_ptr<const OntologyDag> dag;
};

struct PyRelease {
  std::shared_ptr<AnnotationRelease> release;
  const AnnotationRelease& ref() const { return *release; }
};

struct PyMatrix {
  std::shared_ptr<SimilarityMatrix> matrix;
};

py::dict summary_dict(const DistributionSummary& s) {
  py::dict out;
  out["min"] = s.min;
  out["q1"] = s.q1;
  out["median"] = s.median;
  out["q3"] = s.q3;
  out["max"] = s.max;
  out["mean"] = s.mean;
  out["n"] = s.n;
  return out;
}

py::dict selection_dict(const SelectionResult& result,
                        const AnnotationRelease& release) {
  py::list negatives;
  for (const ProteinIndex i : result.negatives)
    negatives.append(release.protein(i));
  py::dict out;
  out["term"] = release.dag().accession(result.term);
  out["negatives"] = negatives;
  out["n_heuristic"] = result.n_heuristic;
  out["n_filled"] = result.n_filled;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "GO annotation-evolution analysis and negative-example selection";

  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<StructuralError>(m, "StructuralError");
  py::register_exception<LookupError>(m, "GoLookupError");
  py::register_exception<DomainError>(m, "GoDomainError");
  py::register_exception<EmptyResultError>(m, "EmptyResultError");

  py::class_<PyOntology>(m, "Ontology")
      .def_property_readonly(
          "term_count", [](const PyOntology& o) { return o.dag->term_count(); })
      .def_property_readonly(
          "max_level", [](const PyOntology& o) { return o.dag->max_level(); })
      .def("index",
           [](const PyOntology& o, const std::string& accession) {
             return o.dag->index_of(accession);
           })
      .def("accession",
           [](const PyOntology& o, TermIndex k) { return o.dag->accession(k); })
      .def("branch",
           [](const PyOntology& o, TermIndex k) {
             return std::string(to_string(o.dag->branch_of(k)));
           })
      .def("name",
           [](const PyOntology& o, TermIndex k) { return o.dag->term(k).name; })
      .def("level", [](const PyOntology& o, TermIndex k) { return o.dag->level(k); })
      .def("parents",
           [](const PyOntology& o, TermIndex k) {
             const auto span = o.dag->parents(k);
             return std::vector<TermIndex>(span.begin(), span.end());
           })
      .def("children",
           [](const PyOntology& o, TermIndex k) {
             const auto span = o.dag->children(k);
             return std::vector<TermIndex>(span.begin(), span.end());
           })
      .def("ancestors",
           [](const PyOntology& o, TermIndex k) { return o.dag->ancestors(k); })
      .def("descendants",
           [](const PyOntology& o, TermIndex k) { return o.dag->descendants(k); })
      .def("siblings",
           [](const PyOntology& o, TermIndex k) { return o.dag->siblings(k); })
      .def("terms_in_branch",
           [](const PyOntology& o, const std::string& branch) {
             return o.dag->terms_in_branch(branch_arg(branch));
           })
      .def("deepest_fork_ancestor",
           [](const PyOntology& o, TermIndex k, TermIndex s) {
             return std::string(
                 o.dag->accession_or_dummy(o.dag->deepest_fork_ancestor(k, s)));
           })
      .def("longest_path_distance",
           [](const PyOntology& o, TermIndex q, TermIndex s) {
             return o.dag->longest_path_distance(q, s);
           })
      .def("dummy_root_distance",
           [](const PyOntology& o, TermIndex s) {
             return o.dag->longest_path_distance(ForkAncestor{}, s);
           });

  py::class_<PyRelease>(m, "Release")
      .def_property_readonly(
          "label", [](const PyRelease& r) { return r.ref().label(); })
      .def_property_readonly(
          "protein_count",
          [](const PyRelease& r) { return r.ref().protein_count(); })
      .def("proteins", [](const PyRelease& r) { return r.ref().proteins(); })
      .def("direct_terms",
           [](const PyRelease& r, const std::string& protein) {
             const auto i = r.ref().find_protein(protein);
             if (!i) throw LookupError("unknown protein " + protein);
             const auto span = r.ref().direct_terms(*i);
             return std::vector<TermIndex>(span.begin(), span.end());
           })
      .def("closed_terms",
           [](const PyRelease& r, const std::string& protein) {
             const auto i = r.ref().find_protein(protein);
             if (!i) throw LookupError("unknown protein " + protein);
             const auto span = r.ref().closed_terms(*i);
             return std::vector<TermIndex>(span.begin(), span.end());
           })
      .def("direct_proteins",
           [](const PyRelease& r, TermIndex k) {
             std::vector<std::string> out;
             for (const ProteinIndex i : r.ref().direct().cols.at(k))
               out.push_back(r.ref().protein(i));
             return out;
           })
      .def("closed_proteins", [](const PyRelease& r, TermIndex k) {
        std::vector<std::string> out;
        for (const ProteinIndex i : r.ref().closed().cols.at(k))
          out.push_back(r.ref().protein(i));
        return out;
      });

  py::class_<PyMatrix>(m, "SimilarityMatrix")
      .def_property_readonly(
          "size", [](const PyMatrix& w) { return w.matrix->size(); })
      .def_property_readonly(
          "measure",
          [](const PyMatrix& w) {
            return std::string(to_string(w.matrix->measure()));
          })
      .def_property_readonly(
          "branch",
          [](const PyMatrix& w) {
            return std::string(to_string(w.matrix->branch()));
          })
      .def("terms", [](const PyMatrix& w) { return w.matrix->terms(); })
      .def("value", [](const PyMatrix& w, TermIndex k, TermIndex s) {
        return w.matrix->value(k, s);
      });

  m.def(
      "parse_obo",
      [](const std::string& text, const std::vector<std::string>& relations) {
        std::istringstream in(text);
        return PyOntology{parse_obo(in, obo_config(relations)).dag};
      },
      py::arg("text"),
      py::arg("relations") = std::vector<std::string>{"is_a", "part_of"});
  m.def(
      "load_obo",
      [](const std::string& path, const std::vector<std::string>& relations) {
        return PyOntology{load_obo(path, obo_config(relations)).dag};
      },
      py::arg("path"),
      py::arg("relations") = std::vector<std::string>{"is_a", "part_of"});

  m.def(
      "parse_gaf",
      [](const std::string& text, const PyOntology& ontology,
         const std::vector<std::string>& evidence, const std::string& label) {
        std::istringstream in(text);
        return PyRelease{std::make_shared<AnnotationRelease>(
            parse_gaf(in, ontology.dag, gaf_config(evidence, label)))};
      },
      py::arg("text"), py::arg("ontology"),
      py::arg("evidence") = std::vector<std::string>{},
      py::arg("label") = "release");
  m.def(
      "load_gaf",
      [](const std::string& path, const PyOntology& ontology,
         const std::vector<std::string>& evidence, const std::string& label) {
        return PyRelease{std::make_shared<AnnotationRelease>(
            load_gaf(path, ontology.dag, gaf_config(evidence, label)))};
      },
      py::arg("path"), py::arg("ontology"),
      py::arg("evidence") = std::vector<std::string>{},
      py::arg("label") = "release");

  m.def(
      "novelty",
      [](const PyRelease& older, const PyRelease& newer,
         const std::string& mode) {
        const auto sets = novelty(older.ref(), newer.ref(),
                                  mode == "closed" ? NoveltyMode::Closed
                                                   : NoveltyMode::Direct);
        py::list out;
        for (const NoveltySet& set : sets)
          out.append(py::make_tuple(
              older.ref().dag().accession(set.term), set.proteins));
        return out;
      },
      py::arg("older"), py::arg("newer"), py::arg("mode") = "direct");

  m.def("term_frequency",
        [](const PyRelease& release, TermIndex k) {
          return term_frequency(release.ref(), k);
        });
  m.def("lin_similarity",
        [](TermIndex k, TermIndex r, const PyRelease& release) {
          return lin_similarity(k, r, release.ref());
        });
  m.def("jaccard_similarity",
        [](TermIndex k, TermIndex r, const PyRelease& release) {
          return jaccard_similarity(k, r, release.ref());
        });

  m.def(
      "build_similarity_matrix",
      [](const std::string& measure, const PyRelease& release,
         const std::string& branch, const std::string& universe,
         unsigned threads) {
        return PyMatrix{std::make_shared<SimilarityMatrix>(
            build_similarity_matrix(measure_arg(measure), release.ref(),
                                    branch_arg(branch),
                                    universe == "annotated"
                                        ? TermUniverse::AnnotatedOnly
                                        : TermUniverse::AllBranchTerms,
                                    threads))};
      },
      py::arg("measure"), py::arg("release"), py::arg("branch"),
      py::arg("universe") = "all", py::arg("threads") = 1);

  m.def("normalized_rank",
        [](const PyMatrix& matrix, TermIndex k, TermIndex s) {
          return normalized_rank(*matrix.matrix, k, s);
        });
  m.def("normalized_rank_row",
        [](const std::vector<double>& row, std::size_t target) {
          return normalized_rank(row, target);
        });
  m.def("quantile_threshold",
        [](const std::vector<double>& row, double quantile) {
          return quantile_threshold(row, quantile);
        });

  m.def(
      "select",
      [](const std::string& method, TermIndex k, const PyRelease& release,
         std::size_t budget, std::uint64_t seed, double k_quantile,
         const PyMatrix* matrix) {
        SelectionConfig config;
        config.method = method_arg(method);
        config.budget = budget;
        config.seed = seed;
        config.k_quantile = k_quantile;
        return selection_dict(
            select(config, k, release.ref(),
                   matrix ? matrix->matrix.get() : nullptr),
            release.ref());
      },
      py::arg("method"), py::arg("term"), py::arg("release"),
      py::arg("budget"), py::arg("seed") = 0, py::arg("k") = 0.0,
      py::arg("matrix") = nullptr);

  m.def(
      "eligible_terms",
      [](const PyRelease& older, const PyRelease& newer,
         const std::string& branch) {
        std::vector<std::string> out;
        for (const TermIndex k :
             eligible_terms(older.ref(), newer.ref(), branch_arg(branch)))
          out.push_back(older.ref().dag().accession(k));
        return out;
      },
      py::arg("older"), py::arg("newer"), py::arg("branch"));

  m.def(
      "wilcoxon_signed_rank",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        const WilcoxonResult r = wilcoxon_signed_rank(x, y);
        py::dict out;
        out["p_value"] = r.p_value;
        out["statistic"] = r.statistic;
        out["n"] = r.n;
        out["exact"] = r.exact;
        out["degenerate"] = r.degenerate;
        return out;
      },
      py::arg("x"), py::arg("y"));

  m.def(
      "tune_k",
      [](const PyRelease& release, const PyMatrix& matrix,
         const std::vector<double>& grid, std::size_t budget,
         std::uint64_t seed, double mask_fraction, std::size_t repeats) {
        return tune_k(release.ref(), *matrix.matrix, grid, budget, seed,
                      mask_fraction, repeats);
      },
      py::arg("release"), py::arg("matrix"), py::arg("grid"),
      py::arg("budget"), py::arg("seed") = 0, py::arg("mask_fraction") = 0.1,
      py::arg("repeats") = 1);

  m.def(
      "rank_analysis",
      [](const PyRelease& older, const PyRelease& newer,
         const PyMatrix& matrix) {
        const auto records = categorize_novelty(older.ref(), newer.ref());
        const auto analysis = rank_analysis(
            records, std::span(matrix.matrix.get(), 1), older.ref().dag());
        py::dict out;
        for (const auto& [branch, summary] : analysis.summaries)
          out[py::str(std::string(to_string(branch)))] = summary_dict(summary);
        return out;
      },
      py::arg("older"), py::arg("newer"), py::arg("matrix"));

  m.def(
      "run_benchmark",
      [](const PyRelease& older, const PyRelease& newer,
         const std::vector<std::string>& branches,
         const std::vector<std::string>& methods,
         const std::vector<std::size_t>& budgets, std::uint64_t seed,
         std::size_t repeats, double fixed_k, unsigned threads) {
        BenchmarkConfig config;
        config.methods.clear();
        for (const std::string& tag : methods)
          config.methods.push_back(method_arg(tag));
        config.budgets = budgets;
        config.seed = seed;
        config.repeats = repeats;
        config.threads = threads;
        if (fixed_k > 0) {
          config.fixed_k[SelectionMethod::NsfsJaccard] = fixed_k;
          config.fixed_k[SelectionMethod::NsfsLin] = fixed_k;
        }
        std::vector<Branch> parsed;
        for (const std::string& tag : branches)
          parsed.push_back(branch_arg(tag));
        const EvaluationReport report =
            run_benchmark(older.ref(), newer.ref(), parsed, config);
        py::dict out;
        for (const BranchReport& br : report.branches) {
          py::dict entry;
          entry["eligible_terms"] = br.terms.size();
          py::dict means;
          for (const MethodCell& cell : br.cells) {
            const std::string key = std::string(to_string(cell.method)) + ":" +
                                    std::to_string(cell.budget);
            means[py::str(key)] = cell.mean_fn;
          }
          entry["mean_fn"] = means;
          py::list tests;
          for (const auto& [budget, pairs] : br.wilcoxon) {
            for (const PairwiseTest& t : pairs) {
              py::dict test;
              test["budget"] = budget;
              test["a"] = std::string(to_string(t.a));
              test["b"] = std::string(to_string(t.b));
              test["p_value"] = t.p_value;
              test["computed"] = t.computed;
              test["degenerate"] = t.degenerate;
              tests.append(test);
            }
          }
          entry["wilcoxon"] = tests;
          out[py::str(std::string(to_string(br.branch)))] = entry;
        }
        return out;
      },
      py::arg("older"), py::arg("newer"),
      py::arg("branches") = std::vector<std::string>{"BP", "MF", "CC"},
      py::arg("methods") = std::vector<std::string>{"random"},
      py::arg("budgets") = std::vector<std::size_t>{500, 750, 1000, 1250, 1500},
      py::arg("seed") = 0, py::arg("repeats") = 10, py::arg("k") = 0.0,
      py::arg("threads") = 1);
}

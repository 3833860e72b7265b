#include "gonsel/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "gonsel/io.hpp"
#include "gonsel/parallel.hpp"

namespace gonsel {

std::string_view to_string(Measure measure) {
  return measure == Measure::Lin ? "lin" : "jaccard";
}

std::optional<Measure> measure_from_tag(std::string_view tag) {
  if (tag == "lin") return Measure::Lin;
  if (tag == "jaccard") return Measure::Jaccard;
  return std::nullopt;
}

SimilarityMatrix::SimilarityMatrix(Measure measure, Branch branch,
                                   std::vector<TermIndex> terms,
                                   std::size_t dag_term_count)
    : measure_(measure), branch_(branch), terms_(std::move(terms)) {
  positions_.assign(dag_term_count, kNoTerm);
  for (std::size_t pos = 0; pos < terms_.size(); ++pos)
    positions_[terms_[pos]] = std::uint32_t(pos);
  values_.assign(terms_.size() * terms_.size(), 0.0);
}

std::size_t SimilarityMatrix::position_of(TermIndex k) const {
  if (!covers(k))
    throw DomainError("term index " + std::to_string(k) +
                      " is not covered by this similarity matrix");
  return positions_[k];
}

namespace {

double frequency(const AnnotationRelease& release, TermIndex k) {
  return double(release.closed().cols[k].size()) /
         double(release.protein_count());
}

// nu of the most informative (lowest-frequency) common ancestor-or-self.
double ma_frequency(TermIndex k, TermIndex r, const AnnotationRelease& release) {
  const OntologyDag& dag = release.dag();
  auto with_self = [&](TermIndex t) {
    auto anc = dag.ancestors(t);
    anc.insert(std::lower_bound(anc.begin(), anc.end(), t), t);
    return anc;
  };
  const auto a = with_self(k);
  const auto b = with_self(r);
  std::vector<TermIndex> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(common));
  double best = 2.0;  // sentinel above any frequency
  for (const TermIndex q : common) {
    const double nu = frequency(release, q);
    if (nu > 0.0 && nu < best) best = nu;
  }
  return best > 1.0 ? 0.0 : best;  // 0 marks "no annotated common ancestor"
}

double lin_from_frequencies(double nu_ma, double nu_k, double nu_r,
                            bool same_term) {
  if (nu_k <= 0.0 || nu_r <= 0.0) return 0.0;
  if (same_term) return 1.0;  // covers the nu == 1 root, where logs vanish
  if (nu_ma <= 0.0) return 0.0;
  const double denom = std::log(nu_k) + std::log(nu_r);
  if (denom == 0.0) return 0.0;  // both frequencies 1, distinct terms
  const double value = 2.0 * std::log(nu_ma) / denom;
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace

double lin_similarity(TermIndex k, TermIndex r,
                      const AnnotationRelease& release) {
  if (release.protein_count() == 0)
    throw DomainError("lin_similarity on a release with no proteins");
  const double nu_k = frequency(release, k);
  const double nu_r = frequency(release, r);
  if (nu_k <= 0.0 || nu_r <= 0.0) return 0.0;
  if (k == r) return 1.0;
  return lin_from_frequencies(ma_frequency(k, r, release), nu_k, nu_r, false);
}

double jaccard_similarity(TermIndex k, TermIndex r,
                          const AnnotationRelease& release) {
  const auto& ck = release.closed().cols.at(k);
  const auto& cr = release.closed().cols.at(r);
  if (ck.empty() && cr.empty()) return 0.0;
  std::size_t inter = 0, ai = 0, bi = 0;
  while (ai < ck.size() && bi < cr.size()) {
    if (ck[ai] < cr[bi]) ++ai;
    else if (cr[bi] < ck[ai]) ++bi;
    else { ++inter; ++ai; ++bi; }
  }
  const std::size_t uni = ck.size() + cr.size() - inter;
  return double(inter) / double(uni);
}

SimilarityMatrix build_similarity_matrix(Measure measure,
                                         const AnnotationRelease& release,
                                         Branch branch, TermUniverse universe,
                                         unsigned threads) {
  const OntologyDag& dag = release.dag();
  std::vector<TermIndex> terms;
  for (const TermIndex k : dag.terms_in_branch(branch)) {
    if (universe == TermUniverse::AllBranchTerms ||
        !release.closed().cols[k].empty())
      terms.push_back(k);
  }
  if (terms.empty())
    throw DomainError(std::string("branch ") + std::string(to_string(branch)) +
                      " has no terms to build a matrix over");
  SimilarityMatrix matrix(measure, branch, terms, dag.term_count());
  const std::size_t m = matrix.size();
  release.closed();  // force the closure once, outside the worker pool

  if (measure == Measure::Jaccard) {
    // Bit-packed closed columns make the pairwise intersections cheap.
    const std::size_t words = (release.protein_count() + 63) / 64;
    std::vector<std::uint64_t> bits(m * words, 0);
    std::vector<std::size_t> counts(m);
    for (std::size_t row = 0; row < m; ++row) {
      const auto& col = release.closed().cols[terms[row]];
      counts[row] = col.size();
      for (const ProteinIndex i : col)
        bits[row * words + i / 64] |= std::uint64_t(1) << (i % 64);
    }
    parallel_for(m, threads, [&](std::size_t row) {
      for (std::size_t colp = row; colp < m; ++colp) {
        double value = 0.0;
        if (counts[row] + counts[colp] > 0) {
          std::size_t inter = 0;
          const std::uint64_t* a = bits.data() + row * words;
          const std::uint64_t* b = bits.data() + colp * words;
          for (std::size_t w = 0; w < words; ++w)
            inter += std::size_t(__builtin_popcountll(a[w] & b[w]));
          value = double(inter) / double(counts[row] + counts[colp] - inter);
        }
        matrix.at(row, colp) = value;
        matrix.at(colp, row) = value;
      }
    });
    return matrix;
  }

  // Lin: precompute ancestor-or-self lists and frequencies per row term.
  if (release.protein_count() == 0)
    throw DomainError("similarity matrix on a release with no proteins");
  const double n = double(release.protein_count());
  std::vector<double> freq(dag.term_count());
  for (TermIndex k = 0; k < dag.term_count(); ++k)
    freq[k] = double(release.closed().cols[k].size()) / n;
  std::vector<std::vector<TermIndex>> anc_self(m);
  for (std::size_t row = 0; row < m; ++row) {
    anc_self[row] = dag.ancestors(terms[row]);
    auto& v = anc_self[row];
    v.insert(std::lower_bound(v.begin(), v.end(), terms[row]), terms[row]);
  }
  parallel_for(m, threads, [&](std::size_t row) {
    const double nu_k = freq[terms[row]];
    for (std::size_t colp = row; colp < m; ++colp) {
      const double nu_r = freq[terms[colp]];
      double value = 0.0;
      if (nu_k > 0.0 && nu_r > 0.0) {
        if (row == colp) {
          value = 1.0;
        } else {
          double nu_ma = 2.0;
          const auto& a = anc_self[row];
          const auto& b = anc_self[colp];
          std::size_t ai = 0, bi = 0;
          while (ai < a.size() && bi < b.size()) {
            if (a[ai] < b[bi]) ++ai;
            else if (b[bi] < a[ai]) ++bi;
            else {
              const double nu = freq[a[ai]];
              if (nu > 0.0 && nu < nu_ma) nu_ma = nu;
              ++ai; ++bi;
            }
          }
          value = lin_from_frequencies(nu_ma > 1.0 ? 0.0 : nu_ma, nu_k, nu_r,
                                       false);
        }
      }
      matrix.at(row, colp) = value;
      matrix.at(colp, row) = value;
    }
  });
  return matrix;
}

double normalized_rank(std::span<const double> row, std::size_t target) {
  const double value = row[target];
  std::size_t less = 0, equal = 0;
  for (const double x : row) {
    if (x < value) ++less;
    else if (x == value) ++equal;
  }
  // Mean of the tied 1-based positions: less+1 .. less+equal.
  const double mid = double(less) + (double(equal) + 1.0) / 2.0;
  return mid / double(row.size());
}

double normalized_rank(const SimilarityMatrix& matrix, TermIndex k,
                       TermIndex s) {
  return normalized_rank(matrix.row_of(k), matrix.position_of(s));
}

double quantile_threshold(std::span<const double> row, double k_quantile) {
  if (row.empty()) throw DomainError("quantile of an empty row");
  if (!(k_quantile > 0.0 && k_quantile < 1.0))
    throw DomainError("quantile K must lie in (0,1)");
  std::vector<double> sorted(row.begin(), row.end());
  std::sort(sorted.begin(), sorted.end());
  // ceil(K*m) in exact arithmetic; the nudge keeps K*m that is an integer
  // mathematically from drifting up one slot through rounding noise.
  const std::size_t index =
      std::size_t(std::ceil(k_quantile * double(sorted.size()) - 1e-9));
  return sorted[std::clamp<std::size_t>(index, 1, sorted.size()) - 1];
}

namespace {
constexpr char kCacheMagic[8] = {'G', 'N', 'S', 'L', 'S', 'I', 'M', '1'};

template <typename T>
void put(std::ostream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(value));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(value));
  if (!in) throw Error("similarity cache: truncated stream");
  return value;
}
}  // namespace

void write_matrix_cache(std::ostream& out, const SimilarityMatrix& matrix) {
  out.write(kCacheMagic, sizeof(kCacheMagic));
  put<std::uint8_t>(out, std::uint8_t(matrix.measure()));
  put<std::uint8_t>(out, std::uint8_t(matrix.branch()));
  put<std::uint64_t>(out, matrix.size());
  for (const TermIndex k : matrix.terms()) put<std::uint32_t>(out, k);
  for (std::size_t r = 0; r < matrix.size(); ++r)
    for (std::size_t c = 0; c < matrix.size(); ++c)
      put<float>(out, float(matrix.at(r, c)));
}

SimilarityMatrix read_matrix_cache(std::istream& in, const OntologyDag& dag) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0)
    throw Error("similarity cache: bad magic header");
  const auto measure = Measure(get<std::uint8_t>(in));
  const auto branch = Branch(get<std::uint8_t>(in));
  const auto m = get<std::uint64_t>(in);
  std::vector<TermIndex> terms(m);
  for (auto& k : terms) {
    k = get<std::uint32_t>(in);
    if (k >= dag.term_count())
      throw Error("similarity cache: term index out of range for this dag");
  }
  SimilarityMatrix matrix(measure, branch, std::move(terms), dag.term_count());
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) matrix.at(r, c) = get<float>(in);
  return matrix;
}

void write_matrix_csv(std::ostream& out, const SimilarityMatrix& matrix,
                      const OntologyDag& dag) {
  out << "term";
  for (const TermIndex k : matrix.terms()) out << ',' << dag.accession(k);
  out << '\n';
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    out << dag.accession(matrix.terms()[r]);
    for (std::size_t c = 0; c < matrix.size(); ++c)
      out << ',' << format_double(matrix.at(r, c));
    out << '\n';
  }
}

}  // namespace gonsel

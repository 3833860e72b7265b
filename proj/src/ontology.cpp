#include "gonsel/ontology.hpp"

#include <algorithm>
#include <cctype>
#include <deque>

namespace gonsel {

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::BP: return "BP";
    case Branch::MF: return "MF";
    case Branch::CC: return "CC";
  }
  return "??";
}

std::optional<Branch> branch_from_tag(std::string_view tag) {
  if (tag == "BP") return Branch::BP;
  if (tag == "MF") return Branch::MF;
  if (tag == "CC") return Branch::CC;
  return std::nullopt;
}

std::optional<Branch> branch_from_namespace(std::string_view ns) {
  if (ns == "biological_process") return Branch::BP;
  if (ns == "molecular_function") return Branch::MF;
  if (ns == "cellular_component") return Branch::CC;
  return std::nullopt;
}

std::optional<Branch> branch_from_aspect(char aspect) {
  switch (aspect) {
    case 'P': return Branch::BP;
    case 'F': return Branch::MF;
    case 'C': return Branch::CC;
  }
  return std::nullopt;
}

bool is_valid_accession(std::string_view accession) {
  if (accession.size() != 10 || accession.substr(0, 3) != "GO:") return false;
  for (char c : accession.substr(3))
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

namespace {

// CSR packing of an adjacency list.
void pack(std::size_t n,
          const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs,
          bool forward, std::vector<TermIndex>& flat,
          std::vector<std::uint32_t>& off) {
  off.assign(n + 1, 0);
  for (const auto& [child, parent] : pairs) ++off[(forward ? child : parent) + 1];
  for (std::size_t i = 0; i < n; ++i) off[i + 1] += off[i];
  flat.resize(pairs.size());
  std::vector<std::uint32_t> cursor(off.begin(), off.end() - 1);
  for (const auto& [child, parent] : pairs) {
    const auto from = forward ? child : parent;
    flat[cursor[from]++] = forward ? parent : child;
  }
  for (std::size_t i = 0; i < n; ++i)
    std::sort(flat.begin() + off[i], flat.begin() + off[i + 1]);
}

}  // namespace

OntologyDag::OntologyDag(
    std::vector<TermRecord> terms,
    std::vector<std::pair<std::uint32_t, std::uint32_t>> parent_pairs,
    std::unordered_map<std::string, std::string> alt_ids)
    : terms_(std::move(terms)) {
  const std::size_t n = terms_.size();
  by_accession_.reserve(n + alt_ids.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (terms_[i].accession == kDummyRootAccession)
      throw StructuralError("accession " + std::string(kDummyRootAccession) +
                            " is reserved for the synthetic root");
    if (!by_accession_.emplace(terms_[i].accession, TermIndex(i)).second)
      throw StructuralError("duplicate term " + terms_[i].accession);
  }
  for (const auto& [alt, canonical] : alt_ids) {
    const auto it = by_accession_.find(canonical);
    if (it == by_accession_.end())
      throw StructuralError("alt_id " + alt + " maps to unknown term " + canonical);
    if (!by_accession_.emplace(alt, it->second).second)
      throw StructuralError("alt_id " + alt + " collides with an existing accession");
  }

  // Deduplicate edges; a term can reach the same parent via is_a and part_of.
  std::sort(parent_pairs.begin(), parent_pairs.end());
  parent_pairs.erase(std::unique(parent_pairs.begin(), parent_pairs.end()),
                     parent_pairs.end());
  for (const auto& [child, parent] : parent_pairs) {
    if (child >= n || parent >= n)
      throw StructuralError("edge references an unknown term index");
    if (child == parent)
      throw StructuralError("cycle detected at " + terms_[child].accession);
    if (terms_[child].branch != terms_[parent].branch)
      throw StructuralError("edge " + terms_[child].accession + " -> " +
                            terms_[parent].accession + " crosses branches");
  }
  pack(n, parent_pairs, true, parent_flat_, parent_off_);
  pack(n, parent_pairs, false, child_flat_, child_off_);

  // Kahn toposort, parents first; leftovers are on a cycle.
  std::vector<std::uint32_t> pending(n);
  std::deque<TermIndex> ready;
  for (std::size_t i = 0; i < n; ++i) {
    pending[i] = std::uint32_t(parents(TermIndex(i)).size());
    if (pending[i] == 0) ready.push_back(TermIndex(i));
  }
  topo_.reserve(n);
  while (!ready.empty()) {
    const TermIndex t = ready.front();
    ready.pop_front();
    topo_.push_back(t);
    for (const TermIndex c : children(t))
      if (--pending[c] == 0) ready.push_back(c);
  }
  if (topo_.size() != n) {
    for (std::size_t i = 0; i < n; ++i)
      if (pending[i] != 0)
        throw StructuralError("cycle detected at " + terms_[i].accession);
  }

  levels_.assign(n, 0);
  for (const TermIndex t : topo_) {
    int lvl = 0;
    for (const TermIndex p : parents(t)) lvl = std::max(lvl, levels_[p] + 1);
    levels_[t] = lvl;
    max_level_ = std::max(max_level_, lvl);
  }
}

void OntologyDag::check_term(TermIndex k) const {
  if (k >= terms_.size())
    throw LookupError("term index " + std::to_string(k) + " out of range");
}

std::optional<TermIndex> OntologyDag::find(std::string_view accession) const {
  const auto it = by_accession_.find(std::string(accession));
  if (it == by_accession_.end()) return std::nullopt;
  return it->second;
}

TermIndex OntologyDag::index_of(std::string_view accession) const {
  const auto idx = find(accession);
  if (!idx) throw LookupError("unknown term " + std::string(accession));
  return *idx;
}

std::span<const TermIndex> OntologyDag::parents(TermIndex k) const {
  check_term(k);
  return {parent_flat_.data() + parent_off_[k],
          parent_flat_.data() + parent_off_[k + 1]};
}

std::span<const TermIndex> OntologyDag::children(TermIndex k) const {
  check_term(k);
  return {child_flat_.data() + child_off_[k],
          child_flat_.data() + child_off_[k + 1]};
}

std::vector<TermIndex> OntologyDag::terms_in_branch(Branch branch) const {
  std::vector<TermIndex> out;
  for (std::size_t i = 0; i < terms_.size(); ++i)
    if (terms_[i].branch == branch) out.push_back(TermIndex(i));
  return out;
}

std::size_t OntologyDag::branch_size(Branch branch) const {
  std::size_t n = 0;
  for (const auto& t : terms_)
    if (t.branch == branch) ++n;
  return n;
}

std::vector<TermIndex> OntologyDag::reachable(TermIndex start, bool upward) const {
  check_term(start);
  std::vector<bool> seen(terms_.size(), false);
  std::vector<TermIndex> stack{start}, out;
  seen[start] = true;
  while (!stack.empty()) {
    const TermIndex t = stack.back();
    stack.pop_back();
    for (const TermIndex next : upward ? parents(t) : children(t)) {
      if (!seen[next]) {
        seen[next] = true;
        out.push_back(next);
        stack.push_back(next);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TermIndex> OntologyDag::ancestors(TermIndex k) const {
  return reachable(k, true);
}

std::vector<TermIndex> OntologyDag::descendants(TermIndex k) const {
  return reachable(k, false);
}

std::vector<TermIndex> OntologyDag::siblings(TermIndex k) const {
  check_term(k);
  std::vector<bool> seen(terms_.size(), false);
  std::vector<TermIndex> out;
  for (const TermIndex p : parents(k)) {
    for (const TermIndex c : children(p)) {
      if (c != k && !seen[c]) {
        seen[c] = true;
        out.push_back(c);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool OntologyDag::is_ancestor_of(TermIndex candidate, TermIndex k) const {
  check_term(candidate);
  check_term(k);
  if (candidate == k) return false;
  if (branch_of(candidate) != branch_of(k)) return false;
  if (level(candidate) >= level(k)) return false;
  std::vector<bool> seen(terms_.size(), false);
  std::vector<TermIndex> stack{k};
  seen[k] = true;
  while (!stack.empty()) {
    const TermIndex t = stack.back();
    stack.pop_back();
    for (const TermIndex p : parents(t)) {
      if (p == candidate) return true;
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  return false;
}

ForkAncestor OntologyDag::deepest_fork_ancestor(TermIndex k, TermIndex s) const {
  check_term(k);
  check_term(s);
  if (k == s)
    throw DomainError("deepest_fork_ancestor requires distinct terms");
  if (is_ancestor_of(k, s) || is_ancestor_of(s, k))
    throw DomainError("deepest_fork_ancestor requires unrelated terms, got " +
                      accession(k) + " and " + accession(s));
  const auto anc_k = ancestors(k);
  const auto anc_s = ancestors(s);
  std::vector<TermIndex> common;
  std::set_intersection(anc_k.begin(), anc_k.end(), anc_s.begin(), anc_s.end(),
                        std::back_inserter(common));
  if (common.empty()) return ForkAncestor{};  // dummy root fallback
  ForkAncestor best{common.front()};
  for (const TermIndex q : common) {
    // Ties resolve to the smallest accession; indices follow accession order.
    if (level(q) > level(best.term)) best.term = q;
  }
  return best;
}

int OntologyDag::longest_path_distance(TermIndex q, TermIndex s) const {
  check_term(q);
  check_term(s);
  if (q == s) return 0;
  if (!is_ancestor_of(q, s))
    throw DomainError(accession(q) + " is not an ancestor of " + accession(s));
  // Longest s -> q path over the cone of terms that both descend from q and
  // lie on some path from s; DP over the ancestors of s in topo order.
  std::vector<int> dist(terms_.size(), -1);
  dist[q] = 0;
  const auto anc_s = ancestors(s);
  std::vector<bool> relevant(terms_.size(), false);
  for (const TermIndex a : anc_s) relevant[a] = true;
  relevant[s] = true;
  for (const TermIndex t : topo_) {
    if (!relevant[t] || t == q) continue;
    int best = -1;
    for (const TermIndex p : parents(t))
      if (dist[p] >= 0) best = std::max(best, dist[p] + 1);
    dist[t] = best;
  }
  return dist[s];
}

int OntologyDag::longest_path_distance(const ForkAncestor& q, TermIndex s) const {
  if (q.is_dummy()) {
    check_term(s);
    return level(s) + 1;
  }
  return longest_path_distance(q.term, s);
}

std::vector<std::pair<std::string, std::string>>
OntologyDag::alternate_accessions() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& [accession, index] : by_accession_)
    if (accession != terms_[index].accession)
      out.emplace_back(accession, terms_[index].accession);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace gonsel

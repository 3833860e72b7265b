#include "gonsel/cache.hpp"

#include <cstring>
#include <istream>
#include <ostream>

#include "gonsel/errors.hpp"

namespace gonsel {

namespace {

constexpr char kMagic[8] = {'G', 'N', 'S', 'L', 'D', 'A', 'G', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void put_string(std::ostream& out, const std::string& s) {
  put_u32(out, std::uint32_t(s.size()));
  out.write(s.data(), std::streamsize(s.size()));
}

std::uint32_t get_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  if (!in) throw Error("dag cache: truncated stream");
  return v;
}

std::string get_string(std::istream& in) {
  const std::uint32_t n = get_u32(in);
  std::string s(n, '\0');
  in.read(s.data(), n);
  if (!in) throw Error("dag cache: truncated stream");
  return s;
}

}  // namespace

void write_dag_cache(std::ostream& out, const OntologyDag& dag) {
  out.write(kMagic, sizeof(kMagic));
  put_u32(out, std::uint32_t(dag.term_count()));
  for (TermIndex k = 0; k < dag.term_count(); ++k) {
    const TermRecord& t = dag.term(k);
    put_string(out, t.accession);
    put_string(out, t.name);
    out.put(char(t.branch));
  }
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  for (TermIndex k = 0; k < dag.term_count(); ++k)
    for (const TermIndex p : dag.parents(k)) edges.emplace_back(k, p);
  put_u32(out, std::uint32_t(edges.size()));
  for (const auto& [c, p] : edges) {
    put_u32(out, c);
    put_u32(out, p);
  }
  const auto alts = dag.alternate_accessions();
  put_u32(out, std::uint32_t(alts.size()));
  for (const auto& [alt, canonical] : alts) {
    put_string(out, alt);
    put_string(out, canonical);
  }
}

std::shared_ptr<const OntologyDag> read_dag_cache(std::istream& in) {
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
    throw Error("dag cache: bad magic header");
  const std::uint32_t n = get_u32(in);
  std::vector<TermRecord> terms;
  terms.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    TermRecord t;
    t.accession = get_string(in);
    t.name = get_string(in);
    const int b = in.get();
    if (b < 0 || b > 2) throw Error("dag cache: bad branch tag");
    t.branch = Branch(b);
    terms.push_back(std::move(t));
  }
  const std::uint32_t e = get_u32(in);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(e);
  for (std::uint32_t i = 0; i < e; ++i) {
    const std::uint32_t c = get_u32(in);
    const std::uint32_t p = get_u32(in);
    edges.emplace_back(c, p);
  }
  const std::uint32_t a = get_u32(in);
  std::unordered_map<std::string, std::string> alts;
  for (std::uint32_t i = 0; i < a; ++i) {
    std::string alt = get_string(in);
    std::string canonical = get_string(in);
    alts.emplace(std::move(alt), std::move(canonical));
  }
  return std::make_shared<OntologyDag>(std::move(terms), std::move(edges),
                                       std::move(alts));
}

}  // namespace gonsel

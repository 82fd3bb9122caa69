#ifndef PARAHYPER_CATALOG_HPP
#define PARAHYPER_CATALOG_HPP

// Immutable registry of the built-in verification cases: the constant mixed
// structures on R^3 / R^7 / R^11, the flat paraquaternionic triple on R^4,
// flat and conformally-curved para-hermitian pairs, a sheared non-integrable
// triple, the pseudospheres, and the derived tangent-bundle / product /
// cone / circle-bundle cases over these bases. Also parses and validates
// user-supplied constant-coefficient case files (format `parahyper-case v1`).

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "parahyper/constructions.hpp"
#include "parahyper/mixed3.hpp"
#include "parahyper/structures.hpp"
#include "parahyper/tangent.hpp"

namespace parahyper {

struct MixedData {
  MixedTriple mixed;
  std::optional<MetricField> metric;  // compatible metric, when attached
  std::optional<MetricField> seed;    // canonical seed for the four-step construction
  bool sasakian = false;              // Sasakian-type identities expected to hold
};

struct TripleData {
  ParaHypercomplexTriple triple;
  MetricField metric;       // para-hyperhermitian metric
  bool integrable = false;  // Nijenhuis tensors expected to vanish
  std::string integrability_tol = "integrability";
};

struct ParaHermitianData {
  OperatorField P;
  MetricField g;
  bool flat_para_kahler = false;  // all closed-form Nijenhuis sides expected to vanish
};

struct CatalogEntry {
  std::string id;
  std::string summary;
  ChartPtr chart;
  bool constant_coefficients = false;
  bool heavy = false;  // expensive checks run only when explicitly enabled

  std::optional<MixedData> mixed;
  std::optional<TripleData> phc;
  std::optional<ParaHermitianData> ph;
  std::optional<PseudosphereData> sphere;  // extrinsic data for cross checks

  std::optional<Signature> expected_signature;  // of the attached metric
  std::optional<double> einstein_constant;      // Ric = c g expected (0 = Ricci flat)
};

struct Catalog {
  std::vector<CatalogEntry> entries;

  const CatalogEntry* find(const std::string& id) const {
    for (const auto& e : entries)
      if (e.id == id) return &e;
    return nullptr;
  }
};

// fnmatch-style glob on entry ids: '*' and '?' only.
inline bool glob_match(const std::string& pattern, const std::string& text) {
  size_t p = 0, t = 0, star = std::string::npos, mark = 0;
  while (t < text.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == text[t])) {
      ++p, ++t;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = t;
    } else if (star != std::string::npos) {
      p = star + 1;
      t = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

namespace detail {

inline Mat r3_phi(int alpha) {
  Mat m = Mat::Zero(3, 3);
  if (alpha == 1) {
    m(0, 2) = 1.0;
    m(2, 0) = -1.0;
  } else if (alpha == 2) {
    m(1, 2) = 1.0;
    m(2, 1) = 1.0;
  } else {
    m(0, 1) = -1.0;
    m(1, 0) = -1.0;
  }
  return m;
}

inline Vec r3_xi(int alpha) {
  Vec v = Vec::Zero(3);
  v[alpha == 1 ? 1 : alpha == 2 ? 0 : 2] = 1.0;
  return v;
}

inline Vec r3_eta(int alpha) {
  Vec v = Vec::Zero(3);
  if (alpha == 1)
    v[1] = 1.0;
  else if (alpha == 2)
    v[0] = -1.0;
  else
    v[2] = -1.0;
  return v;
}

inline Mat split_flat_metric(int dim) {
  Vec d(dim);
  for (int i = 0; i < dim; ++i) d[i] = i < dim / 2 ? 1.0 : -1.0;
  return Mat(d.asDiagonal());
}

inline Mat pair_swap(int dim) {
  Mat p = Mat::Zero(dim, dim);
  p.topRightCorner(dim / 2, dim / 2).setIdentity();
  p.bottomLeftCorner(dim / 2, dim / 2).setIdentity();
  return p;
}

// Constant mixed triple on R^{4n+3}: phi'_a = diag(phi_a, J_a), xi' = (xi; 0),
// eta' = (eta, 0).
inline MixedTriple block_mixed(ChartPtr chart) {
  const int dim = chart->dim();
  const int rest = dim - 3;
  auto make = [&](int alpha) {
    Mat op = Mat::Zero(dim, dim);
    op.topLeftCorner(3, 3) = r3_phi(alpha);
    if (rest > 0) op.bottomRightCorner(rest, rest) = pq_structure(rest, alpha);
    Vec xi = Vec::Zero(dim), eta = Vec::Zero(dim);
    xi.head(3) = r3_xi(alpha);
    eta.head(3) = r3_eta(alpha);
    return ContactTriple(constant_operator(chart, op), constant_field(chart, xi),
                         constant_field(chart, eta), alpha == 1 ? 1 : -1);
  };
  return MixedTriple(make(1), make(2), make(3));
}

inline MetricField block_metric_seed(ChartPtr chart) {
  const int dim = chart->dim();
  Mat seed = Mat::Identity(dim, dim);
  if (dim > 3) seed.bottomRightCorner(dim - 3, dim - 3) = split_flat_metric(dim - 3);
  return constant_metric(chart, seed);
}

inline MetricField conformal_metric(ChartPtr chart) {
  const int dim = chart->dim();
  Mat eta0 = split_flat_metric(dim);
  return MetricField{chart, [eta0](const Vec& x) -> Mat {
    double f = 0.25 * x[0] + 0.15 * x[1] * x[1] + 0.1 * x[2] * x[3];
    return Mat(std::exp(2.0 * f) * eta0);
  }};
}

// Shear conjugation A(x) = I + x1 e1 e2^T (nilpotent, exact inverse).
inline OperatorField sheared(ChartPtr chart, Mat j0) {
  const int n = chart->dim();
  Mat e = Mat::Zero(n, n);
  e(0, 1) = 1.0;
  return OperatorField{chart, [j0 = std::move(j0), e, n](const Vec& x) -> Mat {
    return (Mat::Identity(n, n) + x[0] * e) * j0 * (Mat::Identity(n, n) - x[0] * e);
  }};
}

}  // namespace detail

inline Catalog builtin_catalog() {
  Catalog cat;
  Tolerances tol;
  SamplePlan lift_plan{8, 1, 0.1};
  FDScheme fd;

  // ---- constant mixed structures ------------------------------------------
  for (int dim : {3, 7, 11}) {
    auto chart = make_box_chart("r" + std::to_string(dim), dim, -1.0, 1.0);
    MixedTriple m = detail::block_mixed(chart);
    MetricField seed = detail::block_metric_seed(chart);
    MetricField metric = compatible_metric(m, seed);
    CatalogEntry e;
    e.id = "r" + std::to_string(dim) + "-mixed";
    e.summary = dim == 3 ? "constant mixed 3-structure on R^3 (explicit matrices)"
                         : "block mixed 3-structure on R^" + std::to_string(dim) + " = R^3 + R^" +
                               std::to_string(dim - 3);
    e.chart = chart;
    e.constant_coefficients = true;
    e.mixed = MixedData{std::move(m), std::move(metric), std::move(seed), false};
    int n = (dim - 3) / 4;
    e.expected_signature = Signature{2 * n + 1, 2 * n + 2};
    cat.entries.push_back(std::move(e));
  }

  // ---- flat paraquaternionic triple on R^4 --------------------------------
  {
    auto chart = make_box_chart("r4", 4, -1.0, 1.0);
    ParaHypercomplexTriple t(constant_operator(chart, detail::pq_structure(4, 1)),
                             constant_operator(chart, detail::pq_structure(4, 2)),
                             constant_operator(chart, detail::pq_structure(4, 3)));
    MetricField metric = constant_metric(chart, detail::split_flat_metric(4));
    // the split metric must make J1 an isometry and J2, J3 anti-isometries
    SamplePlan check_plan{4, 2, 0.1};
    for (const auto& c : compatibility_defect(metric, t, check_plan, tol, true))
      if (c.verdict != Verdict::pass)
        throw IncompatibleInputs("builtin flat metric incompatible with the triple");
    CatalogEntry e;
    e.id = "r4-phc";
    e.summary = "flat paraquaternionic triple on R^4 with split metric";
    e.chart = chart;
    e.constant_coefficients = true;
    e.phc = TripleData{std::move(t), std::move(metric), true, "integrability"};
    e.expected_signature = Signature{2, 2};
    cat.entries.push_back(std::move(e));
  }

  // ---- para-hermitian bases ------------------------------------------------
  {
    auto chart = make_box_chart("flat4", 4, -1.0, 1.0);
    CatalogEntry e;
    e.id = "flat-parakahler";
    e.summary = "flat para-Kahler pair (P, g) on R^4";
    e.chart = chart;
    e.constant_coefficients = true;
    e.ph = ParaHermitianData{constant_operator(chart, detail::pair_swap(4)),
                             constant_metric(chart, detail::split_flat_metric(4)), true};
    e.expected_signature = Signature{2, 2};
    cat.entries.push_back(std::move(e));
  }
  {
    auto chart = make_box_chart("conf4", 4, -1.0, 1.0);
    CatalogEntry e;
    e.id = "conformal-ph";
    e.summary = "conformally flat para-hermitian pair on R^4 (curved)";
    e.chart = chart;
    e.ph = ParaHermitianData{constant_operator(chart, detail::pair_swap(4)),
                             detail::conformal_metric(chart), false};
    e.expected_signature = Signature{2, 2};
    cat.entries.push_back(std::move(e));
  }

  // ---- sheared non-integrable triple ---------------------------------------
  {
    auto chart = make_box_chart("shear4", 4, -1.0, 1.0);
    ParaHypercomplexTriple t(detail::sheared(chart, detail::pq_structure(4, 1)),
                             detail::sheared(chart, detail::pq_structure(4, 2)),
                             detail::sheared(chart, detail::pq_structure(4, 3)));
    // g = eta0(A^{-1} ., A^{-1} .) stays compatible with the conjugated triple
    Mat eta0 = detail::split_flat_metric(4);
    Mat e12 = Mat::Zero(4, 4);
    e12(0, 1) = 1.0;
    MetricField metric{chart, [eta0, e12](const Vec& x) -> Mat {
      Mat ainv = Mat::Identity(4, 4) - x[0] * e12;
      return pullback(eta0, ainv);
    }};
    CatalogEntry e;
    e.id = "conjugated-triple";
    e.summary = "shear-conjugated paraquaternionic triple on R^4 (not integrable)";
    e.chart = chart;
    e.phc = TripleData{std::move(t), std::move(metric), false, "integrability"};
    e.expected_signature = Signature{2, 2};
    cat.entries.push_back(std::move(e));
  }

  // ---- pseudospheres --------------------------------------------------------
  for (int n : {0, 1}) {
    PseudosphereData d = make_pseudosphere_data(n);
    MixedTriple m = pseudosphere_mixed_triple(d);
    MetricField metric = pseudosphere_metric(d);
    CatalogEntry e;
    int sdim = 4 * n + 3;
    e.id = "s" + std::to_string(sdim) + "-" + std::to_string(2 * n + 1) + "-sphere";
    e.summary = "pseudosphere S^" + std::to_string(sdim) + "_" + std::to_string(2 * n + 1) +
                " with induced mixed Sasakian structure";
    e.chart = d.chart;
    e.heavy = n >= 1;
    e.mixed = MixedData{std::move(m), metric, metric, true};
    e.sphere = d;
    e.expected_signature = Signature{2 * n + 1, 2 * n + 2};
    e.einstein_constant = 4.0 * n + 2.0;
    cat.entries.push_back(std::move(e));
  }

  // ---- derived cases ---------------------------------------------------------
  auto mixed_of = [&cat](const std::string& id) -> const CatalogEntry& {
    const CatalogEntry* e = cat.find(id);
    if (!e || !e->mixed) throw CaseNotFound(id + " (while building derived cases)");
    return *e;
  };

  // tangent bundles over the para-hermitian bases
  for (const std::string base_id : {"flat-parakahler", "conformal-ph"}) {
    const CatalogEntry* base = cat.find(base_id);
    TangentChart tc = make_tangent_chart(base->chart, levi_civita(base->ph->g, fd));
    ParaHypercomplexTriple lifted = lift_structure(tc, base->ph->P, base->ph->g, lift_plan, tol);
    MetricField G = sasaki_metric(tc, base->ph->g);
    CatalogEntry e;
    e.id = "tm-" + base_id;
    e.summary = "tangent bundle of " + base_id + " with lifted triple and Sasaki metric";
    e.chart = tc.total;
    e.constant_coefficients = base->constant_coefficients;
    e.phc = TripleData{std::move(lifted), std::move(G), base->ph->flat_para_kahler,
                       "integrability"};
    e.expected_signature = Signature{4, 4};
    cat.entries.push_back(std::move(e));
  }

  // warped products over the mixed bases (f = 1 attached; other warps are
  // exercised by the construction suites)
  for (const std::string base_id : {"r3-mixed", "r7-mixed", "s3-1-sphere"}) {
    const CatalogEntry& base = mixed_of(base_id);
    ProductChart pc = make_product_chart(base.chart, -1.0, 1.0, [](double) { return 1.0; });
    ParaHypercomplexTriple t = product_structure(pc, base.mixed->mixed);
    MetricField metric = product_compatible_metric(pc, *base.mixed->metric);
    CatalogEntry e;
    e.id = "prod-" + base_id;
    e.summary = "product " + base_id + " x I with the block triple";
    e.chart = pc.total;
    e.constant_coefficients = base.constant_coefficients;
    e.phc = TripleData{std::move(t), std::move(metric), true, "integrability"};
    int half = (base.chart->dim() + 1) / 2;
    e.expected_signature = Signature{half, half};
    cat.entries.push_back(std::move(e));
  }

  // trivial circle bundles over the mixed bases
  for (const std::string base_id : {"r3-mixed", "r7-mixed", "s3-1-sphere"}) {
    const CatalogEntry& base = mixed_of(base_id);
    CircleBundleChart cb = make_circle_bundle_chart(base.chart);
    ParaHypercomplexTriple t = circle_bundle_structure(cb, base.mixed->mixed);
    MetricField metric = circle_bundle_metric(cb, *base.mixed->metric);
    CatalogEntry e;
    e.id = "s1b-" + base_id;
    e.summary = "trivial circle bundle " + base_id + " x S^1";
    e.chart = cb.total;
    e.constant_coefficients = base.constant_coefficients;
    e.phc = TripleData{std::move(t), std::move(metric), true, "integrability"};
    int half = (base.chart->dim() + 1) / 2;
    e.expected_signature = Signature{half, half};
    cat.entries.push_back(std::move(e));
  }

  // cone over the pseudosphere
  {
    const CatalogEntry& base = mixed_of("s3-1-sphere");
    ConeChart cc = make_cone_chart(base.chart);
    ParaHypercomplexTriple t = cone_structure(cc, base.mixed->mixed);
    MetricField metric = cone_metric(cc, *base.mixed->metric);
    CatalogEntry e;
    e.id = "cone-s3-1-sphere";
    e.summary = "metric cone over S^3_1 with the parallel triple";
    e.chart = cc.total;
    e.phc = TripleData{std::move(t), std::move(metric), true, "nested"};
    e.expected_signature = Signature{2, 2};
    e.einstein_constant = 0.0;
    cat.entries.push_back(std::move(e));
  }

  return cat;
}

// ---- user case files --------------------------------------------------------
//
//   parahyper-case v1
//   id NAME
//   dim N
//   phi1 matrix N N      (N rows of N numbers)
//   xi1 vector N
//   eta1 covector N
//   ... phi2/xi2/eta2, phi3/xi3/eta3, optional: g matrix N N
//
// '#' starts a comment. Constant coefficients only.

namespace detail {

struct CaseToken {
  std::string text;
  int line, col;
};

inline std::vector<CaseToken> tokenize_case(std::istream& in) {
  std::vector<CaseToken> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i >= line.size()) break;
      size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      tokens.push_back({line.substr(start, i - start), lineno, static_cast<int>(start) + 1});
    }
  }
  return tokens;
}

struct CaseCursor {
  const std::vector<CaseToken>& tokens;
  size_t pos = 0;

  bool done() const { return pos >= tokens.size(); }
  const CaseToken& peek() const {
    if (done()) throw ParseError(last_line(), 1, "unexpected end of file");
    return tokens[pos];
  }
  CaseToken next() {
    const CaseToken& t = peek();
    ++pos;
    return t;
  }
  int last_line() const { return tokens.empty() ? 1 : tokens.back().line; }

  double number() {
    CaseToken t = next();
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t.text, &used);
    } catch (...) {
      throw ParseError(t.line, t.col, "expected a number, got '" + t.text + "'");
    }
    if (used != t.text.size())
      throw ParseError(t.line, t.col, "expected a number, got '" + t.text + "'");
    return v;
  }
  int integer() {
    CaseToken t = next();
    try {
      size_t used = 0;
      int v = std::stoi(t.text, &used);
      if (used != t.text.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw ParseError(t.line, t.col, "expected an integer, got '" + t.text + "'");
    }
  }
  void expect(const std::string& word) {
    CaseToken t = next();
    if (t.text != word)
      throw ParseError(t.line, t.col, "expected '" + word + "', got '" + t.text + "'");
  }
};

}  // namespace detail

inline CatalogEntry parse_user_case(std::istream& in) {
  auto tokens = detail::tokenize_case(in);
  if (tokens.empty()) throw ParseError(1, 1, "empty case file");
  detail::CaseCursor cur{tokens};
  cur.expect("parahyper-case");
  cur.expect("v1");
  cur.expect("id");
  std::string id = cur.next().text;
  cur.expect("dim");
  detail::CaseToken dim_tok = cur.peek();
  int dim = cur.integer();
  if (dim <= 0) throw ParseError(dim_tok.line, dim_tok.col, "dimension must be positive");
  if (dim % 4 != 3)
    throw ParseError(dim_tok.line, dim_tok.col,
                     "mixed 3-structures need dimension 4n+3, got " + std::to_string(dim));

  std::map<std::string, Mat> mats;
  std::map<std::string, Vec> vecs;
  const std::vector<std::string> mat_names = {"phi1", "phi2", "phi3", "g"};
  const std::vector<std::string> vec_names = {"xi1", "xi2", "xi3", "eta1", "eta2", "eta3"};

  while (!cur.done()) {
    detail::CaseToken name_tok = cur.next();
    const std::string& name = name_tok.text;
    bool is_mat = std::find(mat_names.begin(), mat_names.end(), name) != mat_names.end();
    bool is_vec = std::find(vec_names.begin(), vec_names.end(), name) != vec_names.end();
    if (!is_mat && !is_vec)
      throw ParseError(name_tok.line, name_tok.col, "unknown object '" + name + "'");
    if (mats.count(name) || vecs.count(name))
      throw ParseError(name_tok.line, name_tok.col, "duplicate object '" + name + "'");
    if (is_mat) {
      cur.expect("matrix");
      detail::CaseToken rt = cur.peek();
      int rows = cur.integer();
      int cols = cur.integer();
      if (rows != dim || cols != dim)
        throw ParseError(rt.line, rt.col, "'" + name + "' must be " + std::to_string(dim) + "x" +
                                              std::to_string(dim));
      Mat m(rows, cols);
      for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = cur.number();
      mats[name] = std::move(m);
    } else {
      detail::CaseToken kind = cur.next();
      bool is_eta = name.rfind("eta", 0) == 0;
      const std::string expected_kind = is_eta ? "covector" : "vector";
      if (kind.text != expected_kind)
        throw ParseError(kind.line, kind.col,
                         "'" + name + "' must be declared as a " + expected_kind);
      detail::CaseToken lt = cur.peek();
      int len = cur.integer();
      if (len != dim)
        throw ParseError(lt.line, lt.col, "'" + name + "' must have length " + std::to_string(dim));
      Vec v(len);
      for (int i = 0; i < len; ++i) v[i] = cur.number();
      vecs[name] = std::move(v);
    }
  }

  for (const std::string need : {"phi1", "phi2", "phi3"})
    if (!mats.count(need)) throw ParseError(cur.last_line(), 1, "missing object '" + need + "'");
  for (const auto& need : vec_names)
    if (!vecs.count(need)) throw ParseError(cur.last_line(), 1, "missing object '" + need + "'");

  auto chart = make_box_chart(id, dim, -1.0, 1.0);
  auto make = [&](int alpha) {
    std::string s = std::to_string(alpha);
    return ContactTriple(constant_operator(chart, mats.at("phi" + s)),
                         constant_field(chart, vecs.at("xi" + s)),
                         constant_field(chart, vecs.at("eta" + s)), alpha == 1 ? 1 : -1);
  };
  CatalogEntry e;
  e.id = id;
  e.summary = "user case (" + std::to_string(dim) + "-dimensional constant mixed structure)";
  e.chart = chart;
  e.constant_coefficients = true;
  std::optional<MetricField> metric;
  if (mats.count("g")) metric = constant_metric(chart, mats.at("g"));
  e.mixed = MixedData{MixedTriple(make(1), make(2), make(3)), metric, std::nullopt, false};

  // Validate through the axiom checks before accepting the case.
  Tolerances tol;
  SamplePlan plan{4, 1, 0.1};
  for (int a = 1; a <= 3; ++a)
    for (const auto& c :
         check_contact(e.mixed->mixed.triple(a), plan, tol, true, "phi" + std::to_string(a) + ": "))
      if (c.verdict == Verdict::fail) throw ValidationFailed(c.identity, c.residual);
  for (const auto& c : check_mixed_axioms(e.mixed->mixed, plan, tol, true))
    if (c.verdict == Verdict::fail) throw ValidationFailed(c.identity, c.residual);
  if (e.mixed->metric) {
    MetricMixed mm(e.mixed->mixed, *e.mixed->metric);
    for (const auto& c : check_metric_compatibility(mm, plan, tol, true))
      if (c.verdict == Verdict::fail) throw ValidationFailed(c.identity, c.residual);
  }
  return e;
}

inline CatalogEntry load_user_case(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(1, 1, "cannot open '" + path + "'");
  return parse_user_case(in);
}

}  // namespace parahyper

#endif

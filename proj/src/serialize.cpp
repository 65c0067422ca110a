#include "a2rlab/serialize.hpp"

#include <cmath>
#include <limits>

#include "a2rlab/errors.hpp"

namespace nlohmann {

void adl_serializer<Eigen::VectorXd>::to_json(json& j, const Eigen::VectorXd& v) {
  j = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v[i]);
}

void adl_serializer<Eigen::VectorXd>::from_json(const json& j, Eigen::VectorXd& v) {
  v.resize(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
}

void adl_serializer<Eigen::MatrixXd>::to_json(json& j, const Eigen::MatrixXd& m) {
  json data = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) data.push_back(m(r, c));
  }
  j = json{{"rows", m.rows()}, {"cols", m.cols()}, {"col_major", std::move(data)}};
}

void adl_serializer<Eigen::MatrixXd>::from_json(const json& j, Eigen::MatrixXd& m) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("col_major");
  m.resize(rows, cols);
  std::size_t k = 0;
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = data.at(k++).get<double>();
  }
}

void adl_serializer<a2rlab::SparseMatrix>::to_json(json& j, const a2rlab::SparseMatrix& m) {
  json triplets = json::array();
  for (int k = 0; k < m.outerSize(); ++k) {
    for (a2rlab::SparseMatrix::InnerIterator it(m, k); it; ++it) {
      triplets.push_back(json::array({it.row(), it.col(), it.value()}));
    }
  }
  j = json{{"rows", m.rows()}, {"cols", m.cols()}, {"triplets", std::move(triplets)}};
}

void adl_serializer<a2rlab::SparseMatrix>::from_json(const json& j, a2rlab::SparseMatrix& m) {
  std::vector<Eigen::Triplet<double>> t;
  for (const auto& e : j.at("triplets")) {
    t.emplace_back(e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<double>());
  }
  m.resize(j.at("rows").get<Eigen::Index>(), j.at("cols").get<Eigen::Index>());
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
}

}  // namespace nlohmann

namespace a2rlab {

namespace {

json point_json(const Point& p) { return json::array({p[0], p[1], p[2]}); }
Point point_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()}; }

json single_well_json(const SingleWell& w) {
  if (const auto* b = std::get_if<BallWell>(&w)) {
    return {{"family", "ball_well"}, {"center", point_json(b->center)}, {"radius", b->radius},
            {"depth", b->depth}};
  }
  const auto& g = std::get<GaussianWell>(w);
  return {{"family", "gaussian_well"}, {"center", point_json(g.center)}, {"width", g.width},
          {"depth", g.depth}};
}

SingleWell single_well_from(const json& j) {
  const auto name = j.at("family").get<std::string>();
  if (name == "ball_well") {
    return BallWell{point_from(j.at("center")), j.at("radius").get<double>(), j.at("depth").get<double>()};
  }
  if (name == "gaussian_well") {
    return GaussianWell{point_from(j.at("center")), j.at("width").get<double>(),
                        j.at("depth").get<double>()};
  }
  throw UnknownFamily("unknown well family '" + name + "'");
}

// JSON has no representation for inf/nan; encode them as strings.
json real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

double real_from(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  return j.get<double>();
}

}  // namespace

void to_json(json& j, const GridSpec& g) {
  j = json{{"dimension", g.dimension},
           {"lower", point_json(g.lower)},
           {"upper", point_json(g.upper)},
           {"resolution", g.resolution},
           {"spacing", g.spacing}};
}

void from_json(const json& j, GridSpec& g) {
  g.dimension = j.at("dimension").get<int>();
  g.lower = point_from(j.at("lower"));
  g.upper = point_from(j.at("upper"));
  g.resolution = j.at("resolution").get<std::array<int, 3>>();
  g.spacing = j.at("spacing").get<double>();
}

void to_json(json& j, const PotentialFamily& f) {
  if (const auto* b = std::get_if<BallWell>(&f)) {
    j = single_well_json(*b);
  } else if (const auto* g = std::get_if<GaussianWell>(&f)) {
    j = single_well_json(*g);
  } else if (const auto* m = std::get_if<MultiWell>(&f)) {
    json wells = json::array();
    for (const auto& w : m->wells) wells.push_back(single_well_json(w));
    j = json{{"family", "multi_well"}, {"wells", std::move(wells)}};
  } else if (const auto* r = std::get_if<BandLimitedRandom>(&f)) {
    j = json{{"family", "band_limited_random"},
             {"seed", r->seed},
             {"cutoff", r->cutoff},
             {"amplitude", r->amplitude}};
  } else {
    j = json{{"family", "sampled"}};
  }
}

void from_json(const json& j, PotentialFamily& f) {
  const auto name = j.at("family").get<std::string>();
  if (name == "ball_well" || name == "gaussian_well") {
    const auto w = single_well_from(j);
    if (const auto* b = std::get_if<BallWell>(&w)) {
      f = *b;
    } else {
      f = std::get<GaussianWell>(w);
    }
  } else if (name == "multi_well") {
    MultiWell m;
    for (const auto& w : j.at("wells")) m.wells.push_back(single_well_from(w));
    f = m;
  } else if (name == "band_limited_random") {
    f = BandLimitedRandom{j.at("seed").get<std::uint64_t>(), j.at("cutoff").get<int>(),
                          j.at("amplitude").get<double>()};
  } else if (name == "sampled") {
    f = SampledValues{};
  } else {
    throw UnknownFamily("unknown potential family '" + name + "'");
  }
}

void to_json(json& j, const NegativePartNorms& n) {
  json lp = json::array();
  for (const auto& [p, v] : n.lp) lp.push_back(json::array({p, v}));
  j = json{{"level", n.level}, {"l1", n.l1}, {"lp", std::move(lp)}};
}

void from_json(const json& j, NegativePartNorms& n) {
  n.level = j.at("level").get<double>();
  n.l1 = j.at("l1").get<double>();
  n.lp.clear();
  for (const auto& e : j.at("lp")) n.lp[e.at(0).get<double>()] = e.at(1).get<double>();
}

void to_json(json& j, const PotentialField& p) {
  j = json{{"grid", p.grid}, {"family", p.family}, {"values", p.values}, {"warnings", p.warnings}};
}

void from_json(const json& j, PotentialField& p) {
  p.grid = j.at("grid").get<GridSpec>();
  p.family = j.at("family").get<PotentialFamily>();
  p.values = j.at("values").get<std::vector<double>>();
  p.warnings = j.at("warnings").get<std::vector<std::string>>();
}

void to_json(json& j, const SublevelDecomposition& d) {
  j = json{{"grid", d.grid},
           {"level", d.level},
           {"interior", d.interior},
           {"boundary", d.boundary},
           {"edges", d.edges},
           {"component_of", d.component_of},
           {"component_count", d.component_count},
           {"diameter", d.diameter}};
}

void from_json(const json& j, SublevelDecomposition& d) {
  d.grid = j.at("grid").get<GridSpec>();
  d.level = j.at("level").get<double>();
  d.interior = j.at("interior").get<std::vector<Index>>();
  d.boundary = j.at("boundary").get<std::vector<Index>>();
  d.edges = j.at("edges").get<std::vector<std::array<Index, 2>>>();
  d.component_of = j.at("component_of").get<std::vector<int>>();
  d.component_count = j.at("component_count").get<int>();
  d.diameter = j.at("diameter").get<double>();
}

void to_json(json& j, const AssembledPencil& p) {
  j = json{{"grid", p.grid},
           {"level", p.level},
           {"nodes", p.nodes},
           {"n_interior", p.n_interior},
           {"n_boundary", p.n_boundary},
           {"stiffness", p.stiffness},
           {"mass", p.mass},
           {"sigma", p.sigma}};
}

void from_json(const json& j, AssembledPencil& p) {
  p.grid = j.at("grid").get<GridSpec>();
  p.level = j.at("level").get<double>();
  p.nodes = j.at("nodes").get<std::vector<Index>>();
  p.n_interior = j.at("n_interior").get<Index>();
  p.n_boundary = j.at("n_boundary").get<Index>();
  p.stiffness = j.at("stiffness").get<SparseMatrix>();
  p.mass = j.at("mass").get<Eigen::VectorXd>();
  p.sigma = j.at("sigma").get<Eigen::VectorXd>();
}

void to_json(json& j, const Inertia& i) {
  j = json{{"n_minus", i.n_minus}, {"n_zero", i.n_zero}, {"n_plus", i.n_plus}};
}

void from_json(const json& j, Inertia& i) {
  i.n_minus = j.at("n_minus").get<Index>();
  i.n_zero = j.at("n_zero").get<Index>();
  i.n_plus = j.at("n_plus").get<Index>();
}

void to_json(json& j, const SpectralSummary& s) {
  j = json{{"label", s.label}, {"eigenvalues", s.eigenvalues}};
  j["eigenvectors"] = s.eigenvectors ? json(*s.eigenvectors) : json(nullptr);
}

void from_json(const json& j, SpectralSummary& s) {
  s.label = j.at("label").get<std::string>();
  s.eigenvalues = j.at("eigenvalues").get<Eigen::VectorXd>();
  const auto& v = j.at("eigenvectors");
  if (v.is_null()) {
    s.eigenvectors.reset();
  } else {
    s.eigenvectors = v.get<Eigen::MatrixXd>();
  }
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "holds") return Verdict::holds;
  if (s == "violated") return Verdict::violated;
  return Verdict::not_applicable;
}

void to_json(json& j, const BoundReport& r) {
  json inputs = json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = real(v);
  j = json{{"name", r.name},
           {"inputs", std::move(inputs)},
           {"point_name", r.point_name},
           {"point", real(r.point)},
           {"rhs", real(r.rhs)},
           {"lhs", real(r.lhs)},
           {"lhs_integer", r.lhs_integer},
           {"tolerance", r.tolerance},
           {"verdict", to_string(r.verdict)},
           {"notes", r.notes}};
}

void from_json(const json& j, BoundReport& r) {
  r.name = j.at("name").get<std::string>();
  r.inputs.clear();
  for (const auto& [k, v] : j.at("inputs").items()) r.inputs[k] = real_from(v);
  r.point_name = j.at("point_name").get<std::string>();
  r.point = real_from(j.at("point"));
  r.rhs = real_from(j.at("rhs"));
  r.lhs = real_from(j.at("lhs"));
  r.lhs_integer = j.at("lhs_integer").get<bool>();
  r.tolerance = j.at("tolerance").get<double>();
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.notes = j.at("notes").get<std::string>();
}

}  // namespace a2rlab

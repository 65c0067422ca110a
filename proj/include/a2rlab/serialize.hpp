#pragma once

// JSON encoding of the domain types. Doubles are written in shortest
// round-trip form, so decode(encode(x)) == x exactly.

#include <json.hpp>

#include "a2rlab/model.hpp"

namespace nlohmann {

template <>
struct adl_serializer<Eigen::VectorXd> {
  static void to_json(json& j, const Eigen::VectorXd& v);
  static void from_json(const json& j, Eigen::VectorXd& v);
};

template <>
struct adl_serializer<Eigen::MatrixXd> {
  static void to_json(json& j, const Eigen::MatrixXd& m);
  static void from_json(const json& j, Eigen::MatrixXd& m);
};

template <>
struct adl_serializer<a2rlab::SparseMatrix> {
  static void to_json(json& j, const a2rlab::SparseMatrix& m);
  static void from_json(const json& j, a2rlab::SparseMatrix& m);
};

}  // namespace nlohmann

namespace a2rlab {

using json = nlohmann::json;

void to_json(json& j, const GridSpec& g);
void from_json(const json& j, GridSpec& g);

void to_json(json& j, const PotentialFamily& f);
void from_json(const json& j, PotentialFamily& f);

void to_json(json& j, const NegativePartNorms& n);
void from_json(const json& j, NegativePartNorms& n);

void to_json(json& j, const PotentialField& p);
void from_json(const json& j, PotentialField& p);

void to_json(json& j, const SublevelDecomposition& d);
void from_json(const json& j, SublevelDecomposition& d);

void to_json(json& j, const AssembledPencil& p);
void from_json(const json& j, AssembledPencil& p);

void to_json(json& j, const Inertia& i);
void from_json(const json& j, Inertia& i);

void to_json(json& j, const SpectralSummary& s);
void from_json(const json& j, SpectralSummary& s);

void to_json(json& j, const BoundReport& r);
void from_json(const json& j, BoundReport& r);

Verdict verdict_from_string(const std::string& s);

}  // namespace a2rlab

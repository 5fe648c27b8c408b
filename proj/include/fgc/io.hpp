#pragma once

#include "fgc/cover.hpp"
#include "fgc/surface.hpp"

#include <json.hpp>

#include <string>

namespace fgc::io {

using json = nlohmann::ordered_json;

/// Bad input files (parse errors, missing fields, determinant != 1).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GroupFile {
    GroupPresentation group;
    std::string kind_hint = "cofinite";  // cofinite | second-kind | elementary
};

json to_json(const Isometry& g);
Isometry isometry_from_json(const json& j, Arithmetic mode);

json to_json(const GroupFile& g);
GroupFile group_from_json(const json& j);

json to_json(const DirichletPolygon& P);
DirichletPolygon polygon_from_json(const json& j);

json to_json(const VerificationSummary& v);
json to_json(const CoverCandidate& C);
CoverCandidate cover_from_json(const json& j);

json to_json(const VerificationFailure& f);
json to_json(const NecessityWitness& w);
json to_json(const DistinctDistanceReport& r);

json read_file(const std::string& path);
/// Two-space indent and a trailing newline; doubles in shortest round-trip form.
void write_file(const std::string& path, const json& j);
std::string dump(const json& j);

/// Poincaré-disk picture of P with side indices.
std::string polygon_svg(const DirichletPolygon& P, int size = 600);

}  // namespace fgc::io

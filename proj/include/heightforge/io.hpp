#pragma once

#include <string>

#include "json.hpp"

#include "heightforge/constants.hpp"
#include "heightforge/family.hpp"
#include "heightforge/heights.hpp"
#include "heightforge/preperiodic.hpp"
#include "heightforge/scan.hpp"

namespace heightforge {

using Json = nlohmann::ordered_json;

inline constexpr const char* kScanSchema = "heightforge.scan/1";

/// Accepts a JSON string "num/den" or an integer.
Rational rational_from_json(const Json& j);
Json to_json(const Rational& q);
Json to_json(const Interval& i);
Json to_json(const Place& v);
Json to_json(const LogSum& s);

/// {"e": 2, "F": [a_n, ..., a_0]}
Family family_from_json(const Json& j);
Json family_to_json(const Family& fam);
/// {"numer": [c_0, ...], "denom": [c_0, ...]}, constant term first.
CoverAnalysis cover_from_json(const Json& j);
Json cover_to_json(const CoverAnalysis& cov);

/// Reads a JSON file; SpecError when it is missing or malformed.
Json read_json_file(const std::string& path);

Json to_json(const GreenResult& g);
Json to_json(const HeightResult& h);
Json to_json(const MKConstant& c);
Json to_json(const ConstantsReport& r);
Json to_json(const ResultantBound& r);
Json to_json(const OrbitRecord& r);
Json to_json(const Certificate& c);
Json to_json(const std::vector<PlaceObstruction>& obs);
Json to_json(const CriterionResult& r);
Json to_json(const ScanReport& r);

/// Inverse of to_json(ScanReport) for the fields needed to replay findings.
ScanReport scan_report_from_json(const Json& j);

}  // namespace heightforge

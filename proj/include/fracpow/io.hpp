#pragma once

// JSON forms of certificates and reports. Reals are decimal strings with the
// binary precision they were read from, so a load/dump cycle is bit-exact.

#include <string>

#include <json.hpp>

#include "fracpow/construction.hpp"
#include "fracpow/dimension.hpp"
#include "fracpow/family_analysis.hpp"
#include "fracpow/oracle.hpp"

namespace fracpow {

using Json = nlohmann::json;

inline constexpr const char* kCertificateFormat = "fracpow-certificate";
inline constexpr const char* kReportSchema = "fracpow-report/1";
inline constexpr int kCertificateVersion = 1;

Json real_to_json(const Real& x);
Real real_from_json(const Json& j);
Json to_json(const Enclosure& e);
Enclosure enclosure_from_json(const Json& j);

Json to_json(const ConstructionCertificate& cert);
/// Throws ConfigError on malformed input.
ConstructionCertificate certificate_from_json(const Json& j);
std::string dump_certificate(const ConstructionCertificate& cert);
ConstructionCertificate load_certificate(const std::string& text);

Json to_json(const DimensionReport& r);
Json to_json(const MembershipVerdict& v);
Json to_json(const ConditionReport& r);
Json to_json(const GrowthProfile& p);

/// {"schema", "kind", "config", "result"}
Json report_envelope(const std::string& kind, const Json& config, const Json& result);

}  // namespace fracpow

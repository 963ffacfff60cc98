#ifndef DEFECT_CERT_IO_HPP
#define DEFECT_CERT_IO_HPP

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "defect_cert/certify.hpp"
#include "defect_cert/prony.hpp"
#include "defect_cert/rank_cert.hpp"
#include "defect_cert/signal.hpp"

namespace dcert {

using Json = nlohmann::json;

// {"W": int, "K": int, "sums": [real]}
Json to_json(const WindowData& w);
WindowData window_data_from_json(const Json& j);

// Header "k,S_k", one row per window. W is not part of the CSV and must be supplied.
std::string to_csv(const WindowData& w);
WindowData window_data_from_csv(std::string_view text, std::size_t W);

/// Exact integers are string-encoded; when exact evaluation overflowed the
/// matrix and sums hold residues mod p instead.
Json to_json(const RankCertificate& cert);
Json to_json(const PronyModel& model);
Json to_json(const CertReport& report);

/// Structural checks for the emitted records. Throw ArgumentError describing the first problem.
void validate_window_json(const Json& j);
void validate_certificate_json(const Json& j);
void validate_model_json(const Json& j);
void validate_report_json(const Json& j);

/// Loads WindowData from a .json or .csv file (W required for CSV).
WindowData load_windows(const std::string& path, std::size_t W_for_csv);

/// One value per line (or comma separated); blank lines and '#' comments skipped.
std::vector<double> parse_sequence(std::string_view text);

}  // namespace dcert

#endif  // DEFECT_CERT_IO_HPP

#include "defect_cert/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "defect_cert/errors.hpp"

namespace dcert {

namespace {

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json complex_array(const std::vector<Complex>& v) {
    Json out = Json::array();
    for (const auto& z : v) out.push_back(Json::array({z.real(), z.imag()}));
    return out;
}

void require(bool cond, const std::string& what) {
    if (!cond) throw ArgumentError("invalid record: " + what);
}

bool is_int_string(const Json& j) {
    if (!j.is_string()) return false;
    try {
        parse_int128(j.get<std::string>());
        return true;
    } catch (const ArgumentError&) {
        return false;
    }
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw ArgumentError("not a number: '" + s + "'");
    }
    if (used != s.size()) throw ArgumentError("not a number: '" + s + "'");
    return v;
}

}  // namespace

Json to_json(const WindowData& w) {
    return Json{{"W", w.block_length}, {"K", w.count()}, {"sums", w.sums}};
}

void validate_window_json(const Json& j) {
    require(j.is_object(), "window record must be an object");
    require(j.contains("W") && j["W"].is_number_integer() && j["W"].get<long long>() >= 1, "W must be an integer >= 1");
    require(j.contains("K") && j["K"].is_number_integer(), "K must be an integer");
    require(j.contains("sums") && j["sums"].is_array(), "sums must be an array");
    for (const auto& s : j["sums"]) require(s.is_number(), "sums entries must be numbers");
    require(j["K"].get<long long>() == static_cast<long long>(j["sums"].size()), "K must equal the number of sums");
}

WindowData window_data_from_json(const Json& j) {
    validate_window_json(j);
    return WindowData(j["sums"].get<std::vector<double>>(), j["W"].get<std::size_t>());
}

std::string to_csv(const WindowData& w) {
    std::ostringstream os;
    os.precision(17);
    os << "k,S_k\n";
    for (std::size_t k = 0; k < w.count(); ++k) os << k << ',' << w.sums[k] << '\n';
    return os.str();
}

WindowData window_data_from_csv(std::string_view text, std::size_t W) {
    std::istringstream in{std::string(text)};
    std::string line;
    std::vector<double> sums;
    bool header_seen = false;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            if (t == "k,S_k") continue;
        }
        const auto comma = t.find(',');
        if (comma == std::string::npos) throw ArgumentError("CSV row needs 'k,S_k': '" + t + "'");
        const double k = parse_double(trim(t.substr(0, comma)));
        if (k != static_cast<double>(sums.size())) throw ArgumentError("CSV rows must be ordered k = 0, 1, ...");
        sums.push_back(parse_double(trim(t.substr(comma + 1))));
    }
    return WindowData(std::move(sums), W);
}

Json to_json(const RankCertificate& cert) {
    Json pi0 = Json::array();
    for (auto v : cert.params.flat()) pi0.push_back(v);
    Json sums = Json::array();
    Json jac = Json::array();
    const std::size_t n = cert.jacobian_residues.rows();
    if (cert.exact()) {
        for (auto v : *cert.window_sums) sums.push_back(to_string(v));
        for (std::size_t r = 0; r < n; ++r) {
            Json row = Json::array();
            for (std::size_t c = 0; c < n; ++c) row.push_back(to_string((*cert.jacobian)(r, c)));
            jac.push_back(std::move(row));
        }
    } else {
        for (const auto& v : cert.window_sum_residues) sums.push_back(std::to_string(v.value()));
        for (std::size_t r = 0; r < n; ++r) {
            Json row = Json::array();
            for (std::size_t c = 0; c < n; ++c) row.push_back(std::to_string(cert.jacobian_residues(r, c).value()));
            jac.push_back(std::move(row));
        }
    }
    Json out{{"d", cert.d},
             {"W", cert.W},
             {"p", cert.prime},
             {"pi0", pi0},
             {"window_sums", sums},
             {"jacobian", jac},
             {"det_mod_p", cert.det_residue},
             {"nonzero", cert.nonzero},
             {"exact", cert.exact()}};
    if (!cert.downgrade_reason.empty()) out["downgrade"] = cert.downgrade_reason;
    return out;
}

void validate_certificate_json(const Json& j) {
    require(j.is_object(), "certificate must be an object");
    for (const char* key : {"d", "W", "p", "det_mod_p"}) {
        require(j.contains(key) && j[key].is_number_unsigned(), std::string(key) + " must be a nonnegative integer");
    }
    const auto d = j["d"].get<std::size_t>();
    const auto n = 2 * d + 1;
    require(j.contains("pi0") && j["pi0"].is_array() && j["pi0"].size() == n, "pi0 must have 2d+1 integers");
    for (const auto& v : j["pi0"]) require(v.is_number_integer(), "pi0 entries must be integers");
    require(j.contains("window_sums") && j["window_sums"].is_array() && j["window_sums"].size() == n,
            "window_sums must have 2d+1 entries");
    for (const auto& v : j["window_sums"]) require(is_int_string(v), "window_sums must be string-encoded integers");
    require(j.contains("jacobian") && j["jacobian"].is_array() && j["jacobian"].size() == n,
            "jacobian must have 2d+1 rows");
    for (const auto& row : j["jacobian"]) {
        require(row.is_array() && row.size() == n, "jacobian rows must have 2d+1 entries");
        for (const auto& v : row) require(is_int_string(v), "jacobian entries must be string-encoded integers");
    }
    require(j.contains("nonzero") && j["nonzero"].is_boolean(), "nonzero must be boolean");
    require(j.contains("exact") && j["exact"].is_boolean(), "exact must be boolean");
    require(j["nonzero"].get<bool>() == (j["det_mod_p"].get<std::uint64_t>() != 0), "nonzero must match det_mod_p");
    require(j["det_mod_p"].get<std::uint64_t>() < j["p"].get<std::uint64_t>(), "det_mod_p must lie in [0,p)");
}

Json to_json(const PronyModel& model) {
    Json flags = Json::array();
    for (PronyFlag f : model.flags) flags.push_back(to_string(f));
    return Json{{"nodes", complex_array(model.nodes)},
                {"amplitudes", complex_array(model.amplitudes)},
                {"char_coeffs", model.char_coeffs},
                {"hankel_condition", finite_or_null(model.hankel_condition)},
                {"vandermonde_condition", finite_or_null(model.vandermonde_condition)},
                {"flags", flags}};
}

void validate_model_json(const Json& j) {
    require(j.is_object(), "model must be an object");
    for (const char* key : {"nodes", "amplitudes"}) {
        require(j.contains(key) && j[key].is_array(), std::string(key) + " must be an array");
        for (const auto& z : j[key]) {
            require(z.is_array() && z.size() == 2 && z[0].is_number() && z[1].is_number(),
                    std::string(key) + " entries must be [re, im]");
        }
    }
    require(j.contains("char_coeffs") && j["char_coeffs"].is_array(), "char_coeffs must be an array");
    for (const char* key : {"hankel_condition", "vandermonde_condition"}) {
        require(j.contains(key) && (j[key].is_number() || j[key].is_null()), std::string(key) + " must be a number");
    }
    require(j.contains("flags") && j["flags"].is_array(), "flags must be an array");
    for (const auto& f : j["flags"]) require(f.is_string(), "flags must be strings");
}

Json to_json(const CertReport& report) {
    Json out{{"decision", to_string(report.decision)},
             {"certificate_value", finite_or_null(report.certificate_value)},
             {"defect", finite_or_null(report.defect_estimate)},
             {"threshold", finite_or_null(report.threshold)},
             {"eps_bound", finite_or_null(report.eps_bound)},
             {"L", finite_or_null(report.lipschitz_estimate)},
             {"flags", Json(report.flags)}};
    out["model"] = report.reconstruction ? to_json(*report.reconstruction) : Json(nullptr);
    return out;
}

void validate_report_json(const Json& j) {
    require(j.is_object(), "report must be an object");
    require(j.contains("decision") && j["decision"].is_string(), "decision must be a string");
    const auto d = j["decision"].get<std::string>();
    require(d == "zero" || d == "nonzero" || d == "inconclusive", "decision must be zero|nonzero|inconclusive");
    for (const char* key : {"certificate_value", "defect", "threshold", "eps_bound", "L"}) {
        require(j.contains(key) && (j[key].is_number() || j[key].is_null()), std::string(key) + " must be a number");
    }
    require(j.contains("flags") && j["flags"].is_array(), "flags must be an array");
    require(j.contains("model"), "model key is required (null when absent)");
    if (!j["model"].is_null()) validate_model_json(j["model"]);
}

WindowData load_windows(const std::string& path, std::size_t W_for_csv) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        Json j;
        try {
            j = Json::parse(text);
        } catch (const Json::parse_error& e) {
            throw ArgumentError(std::string("malformed JSON: ") + e.what());
        }
        return window_data_from_json(j);
    }
    if (W_for_csv == 0) throw ArgumentError("CSV window files need --W");
    return window_data_from_csv(text, W_for_csv);
}

std::vector<double> parse_sequence(std::string_view text) {
    std::vector<double> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream row(t);
        std::string cell;
        while (std::getline(row, cell, ',')) {
            const std::string c = trim(cell);
            if (!c.empty()) out.push_back(parse_double(c));
        }
    }
    return out;
}

}  // namespace dcert

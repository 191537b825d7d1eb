#include "fkdv/report.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace fkdv::report {

namespace {

using nlohmann::ordered_json;

std::vector<double> grid_abscissae(const Grid& g) {
    std::vector<double> xs(g.n);
    for (int j = 0; j < g.n; ++j) xs[j] = g.x(j);
    return xs;
}

}  // namespace

void ProfileRecord::validate() const {
    if (x.size() != value.size())
        throw std::invalid_argument("profile record: x and value lengths differ");
    for (std::size_t i = 1; i < x.size(); ++i)
        if (!(x[i] > x[i - 1]))
            throw std::invalid_argument("profile record: x is not strictly increasing");
    if (metadata.kind != "periodic" && metadata.kind != "solitary")
        throw std::invalid_argument("profile record: unknown kind '" + metadata.kind + "'");
}

ProfileRecord make_record(const steady::WaveSolution& w) {
    ProfileRecord rec;
    rec.x = grid_abscissae(w.phi.grid);
    rec.value = w.phi.values;
    rec.metadata.s = w.s;
    rec.metadata.lambda = w.lambda;
    rec.metadata.P = w.phi.grid.period;
    rec.metadata.mu = w.mu;
    rec.metadata.kind = "periodic";
    rec.metadata.residual_norm = w.residual_norm;
    rec.metadata.timestamp = timestamp_utc_now();
    return rec;
}

ProfileRecord make_record(const solitary::SolitaryWave& w, double s) {
    ProfileRecord rec;
    rec.x = grid_abscissae(w.Phi.grid);
    rec.value = w.Phi.values;
    rec.metadata.s = s;
    rec.metadata.lambda = w.lambda;
    rec.metadata.P = w.Phi.grid.period;
    rec.metadata.mu = w.mu_lambda;
    rec.metadata.kind = "solitary";
    rec.metadata.residual_norm = steady::residual(s, w.Phi, w.mu_lambda).sup_norm();
    rec.metadata.timestamp = timestamp_utc_now();
    return rec;
}

nlohmann::ordered_json to_json(const ProfileRecord& rec) {
    ordered_json j;
    j["schema"] = kSchemaVersion;
    j["x"] = rec.x;
    j["value"] = rec.value;
    ordered_json m;
    m["s"] = rec.metadata.s;
    m["lambda"] = rec.metadata.lambda;
    m["P"] = rec.metadata.P;
    m["mu"] = rec.metadata.mu;
    m["kind"] = rec.metadata.kind;
    m["residual_norm"] = rec.metadata.residual_norm;
    m["timestamp"] = rec.metadata.timestamp;
    m["tool_version"] = rec.metadata.tool_version;
    j["metadata"] = std::move(m);
    return j;
}

ProfileRecord record_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("profile record: not valid JSON: ") + e.what());
    }
    ProfileRecord rec;
    try {
        if (j.at("schema").get<int>() != kSchemaVersion)
            throw std::invalid_argument("profile record: unsupported schema version");
        rec.x = j.at("x").get<std::vector<double>>();
        rec.value = j.at("value").get<std::vector<double>>();
        const auto& m = j.at("metadata");
        rec.metadata.s = m.at("s").get<double>();
        rec.metadata.lambda = m.at("lambda").get<double>();
        rec.metadata.P = m.at("P").get<double>();
        rec.metadata.mu = m.at("mu").get<double>();
        rec.metadata.kind = m.at("kind").get<std::string>();
        rec.metadata.residual_norm = m.at("residual_norm").get<double>();
        rec.metadata.timestamp = m.at("timestamp").get<std::string>();
        rec.metadata.tool_version = m.at("tool_version").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("profile record: missing or mistyped field: ") + e.what());
    }
    rec.validate();
    return rec;
}

nlohmann::ordered_json to_json(const diag::DiagnosticsReport& rep) {
    ordered_json j;
    j["mean_identity_relerr"] = rep.mean_identity_relerr;
    j["bound_violation"] = rep.bound_violation;
    j["monotonicity_violation"] = rep.monotonicity_violation;
    j["speed_window_ok"] = rep.speed_window_ok;
    if (rep.crest) {
        ordered_json c;
        c["model"] = rep.crest->model == diag::CrestFitReport::Model::power ? "power" : "x_log";
        c["sigma_fit"] = rep.crest->sigma_fit;
        c["prefactor_fit"] = rep.crest->prefactor_fit;
        c["x_lo"] = rep.crest->x_lo;
        c["x_hi"] = rep.crest->x_hi;
        c["r_squared"] = rep.crest->r_squared;
        c["reliable"] = rep.crest->r_squared >= 0.99;
        j["crest_fit"] = std::move(c);
    } else {
        j["crest_fit"] = nullptr;
    }
    if (rep.decay_rate_fit)
        j["decay_rate_fit"] = *rep.decay_rate_fit;
    else
        j["decay_rate_fit"] = nullptr;
    return j;
}

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{})
        throw std::invalid_argument("format_double: value does not fit");
    return std::string(buf, end);
}

std::string timestamp_utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string strip_timestamp_lines(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string_view line(text.data() + pos, eol - pos);
        if (line.find("\"timestamp\"") == std::string_view::npos) {
            out.append(line);
            out.push_back('\n');
        }
        pos = eol + 1;
    }
    return out;
}

void write_text_atomic(const std::filesystem::path& target, const std::string& text) {
    static std::atomic<unsigned> counter{0};
    std::filesystem::path tmp = target;
    tmp += ".tmp" + std::to_string(counter.fetch_add(1));
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::invalid_argument("cannot open " + tmp.string() + " for writing");
        f << text;
        f.flush();
        if (!f) throw std::invalid_argument("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
}

void write_profile_csv(const std::filesystem::path& target, const ProfileRecord& rec) {
    rec.validate();
    std::string text = "x,value\n";
    for (std::size_t i = 0; i < rec.x.size(); ++i) {
        text += format_double(rec.x[i]);
        text += ',';
        text += format_double(rec.value[i]);
        text += '\n';
    }
    write_text_atomic(target, text);
}

}  // namespace fkdv::report

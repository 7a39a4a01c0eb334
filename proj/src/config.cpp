#include "gfrag/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "gfrag/errors.hpp"

namespace gfrag {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double d = 0.0;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != v.size()) throw InvalidArgument("config: '" + key + "' expects a number, got '" + v + "'");
    return d;
}

long long to_integer(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    long long i = 0;
    try {
        i = std::stoll(v, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != v.size()) throw InvalidArgument("config: '" + key + "' expects an integer, got '" + v + "'");
    return i;
}

int to_int(const std::string& key, const std::string& v) { return static_cast<int>(to_integer(key, v)); }

std::pair<std::vector<double>, std::vector<double>> read_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("rate table: cannot open '" + path + "'");
    std::vector<double> xs, bs;
    std::string line;
    while (std::getline(in, line)) {
        if (auto c = line.find('#'); c != std::string::npos) line.erase(c);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double x = 0.0, b = 0.0;
        if (!(ls >> x)) continue;
        if (!(ls >> b)) throw InvalidArgument("rate table: line without a rate value in '" + path + "'");
        xs.push_back(x);
        bs.push_back(b);
    }
    return {xs, bs};
}

}  // namespace

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
    const std::string v = trim(value);
    if (key == "n") c.n = to_int(key, v);
    else if (key == "N") c.N = v == "auto" ? 0 : to_int(key, v);
    else if (key == "rate") c.rate.kind = v;
    else if (key == "rate.K") c.rate.K = to_double(key, v);
    else if (key == "rate.gamma") c.rate.gamma = to_double(key, v);
    else if (key == "rate.table") {
        c.rate.table_file = v;
        c.rate.kind = "table";
    } else if (key == "mode") c.mode = kernel_mode_from_string(v);
    else if (key == "profile") c.profile.kind = v;
    else if (key == "profile.center") c.profile.center = to_double(key, v);
    else if (key == "profile.width_octaves") c.profile.width_octaves = to_double(key, v);
    else if (key == "horizon_periods") c.horizon_periods = to_double(key, v);
    else if (key == "K_modes") c.K_modes = to_int(key, v);
    else if (key == "out_dir") c.out_dir = v;
    else if (key == "snapshot_every") {
        const auto s = to_integer(key, v);
        if (s < 0) throw InvalidArgument("config: snapshot_every must be >= 0");
        c.snapshot_every = static_cast<std::size_t>(s);
    } else if (key == "variant") c.variant = v;
    else if (key == "cfl_fraction") c.cfl_fraction = to_double(key, v);
    else if (key == "perron_tolerance") c.perron_tolerance = to_double(key, v);
    else throw InvalidArgument("config: unknown key '" + key + "'");
}

RunConfig parse_config(std::istream& in) {
    RunConfig c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("config line " + std::to_string(lineno) + ": expected 'key = value'");
        apply_setting(c, trim(line.substr(0, eq)), line.substr(eq + 1));
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("config: cannot open '" + path + "'");
    return parse_config(in);
}

void validate(const RunConfig& c) {
    if (c.n < 1) throw InvalidArgument("config: n must be >= 1");
    if (c.N < 0) throw InvalidArgument("config: N must be >= 1 or auto");
    if (c.rate.kind != "power_law" && c.rate.kind != "table")
        throw InvalidArgument("config: rate must be power_law or table");
    if (c.rate.kind == "table" && c.rate.table_file.empty())
        throw InvalidArgument("config: rate = table needs rate.table");
    if (c.profile.kind != "peak" && c.profile.kind != "smooth")
        throw InvalidArgument("config: profile must be peak or smooth");
    if (!(c.horizon_periods >= 0.0) || !std::isfinite(c.horizon_periods))
        throw InvalidArgument("config: horizon_periods must be finite and >= 0");
    if (c.K_modes < 0) throw InvalidArgument("config: K_modes must be >= 0");
    if (c.variant != "exact" && c.variant != "diffusive")
        throw InvalidArgument("config: variant must be exact or diffusive");
    if (c.variant == "diffusive" && !(c.cfl_fraction > 0.0 && c.cfl_fraction < 1.0))
        throw InvalidArgument("config: cfl_fraction must lie in (0, 1) for the diffusive variant");
    if (!(c.perron_tolerance > 0.0)) throw InvalidArgument("config: perron_tolerance must be > 0");
}

nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j;
    j["n"] = c.n;
    j["N"] = c.N == 0 ? nlohmann::json("auto") : nlohmann::json(c.N);
    j["rate"] = {{"kind", c.rate.kind}, {"K", c.rate.K}, {"gamma", c.rate.gamma}, {"table", c.rate.table_file}};
    j["mode"] = to_string(c.mode);
    j["profile"] = {{"kind", c.profile.kind},
                    {"center", c.profile.center},
                    {"width_octaves", c.profile.width_octaves}};
    j["horizon_periods"] = c.horizon_periods;
    j["K_modes"] = c.K_modes;
    j["out_dir"] = c.out_dir;
    j["snapshot_every"] = c.snapshot_every;
    j["variant"] = c.variant;
    j["cfl_fraction"] = c.cfl_fraction;
    j["perron_tolerance"] = c.perron_tolerance;
    j["deterministic"] = true;
    return j;
}

Profile make_profile(const ProfileSpec& spec) {
    if (spec.kind == "smooth") return Profile::smooth();
    return Profile::peak(spec.center, spec.width_octaves);
}

DivisionRate make_rate(const RunConfig& c, const GeometricGrid& grid, KernelMode mode) {
    if (c.rate.kind == "table") {
        auto [xs, bs] = read_table(c.rate.table_file);
        return DivisionRate::from_table(std::move(xs), std::move(bs), grid, mode);
    }
    return DivisionRate::power_law(c.rate.K, c.rate.gamma, grid, mode);
}

Setup build_setup(const RunConfig& c) {
    validate(c);
    int N = c.N;
    if (N == 0) {
        const GeometricGrid probe(c.n, 1);
        N = make_rate(c, probe, c.mode).max_admissible_half_extent(8 * c.n);
        if (N == 0) {
            const auto rate = make_rate(c, probe, c.mode);
            throw StabilityError("config: no stable domain at n = " + std::to_string(c.n) +
                                     "; increase n to at least " + std::to_string(rate.min_admissible_subdivisions()),
                                 rate.stability_number(), 0, rate.min_admissible_subdivisions());
        }
    }
    GeometricGrid grid(c.n, N);
    auto rate = make_rate(c, grid, c.mode);
    rate.require_certificate();
    return Setup{grid, std::move(rate)};
}

}  // namespace gfrag

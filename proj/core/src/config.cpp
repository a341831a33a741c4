#include "exlq/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace exlq {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_double(std::string_view token, const std::string& context) {
    const std::string buf(token);
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || buf.empty()) {
        throw ConfigError("config: cannot parse number '" + buf + "' for " + context);
    }
    return v;
}

std::vector<double> parse_list(std::string_view value, const std::string& context) {
    std::vector<double> out;
    std::string buf(value);
    for (char& ch : buf) {
        if (ch == ',') {
            ch = ' ';
        }
    }
    std::istringstream in(buf);
    std::string token;
    while (in >> token) {
        out.push_back(parse_double(token, context));
    }
    if (out.empty()) {
        throw ConfigError("config: empty value for " + context);
    }
    return out;
}

struct RawConfig {
    std::map<std::string, std::map<std::string, std::string>> sections;
};

RawConfig tokenize(std::string_view text) {
    RawConfig raw;
    std::string current;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;

        const std::size_t comment = line.find_first_of("#;");
        if (comment != std::string_view::npos) {
            line = line.substr(0, comment);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("config line " + std::to_string(line_no) +
                                  ": malformed section header");
            }
            current = std::string(trim(line.substr(1, line.size() - 2)));
            if (current.empty()) {
                throw ConfigError("config line " + std::to_string(line_no) + ": empty section name");
            }
            raw.sections.try_emplace(current);
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        if (current.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": key outside any section");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty() || value.empty()) {
            throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");
        }
        auto& section = raw.sections[current];
        if (!section.emplace(key, value).second) {
            throw ConfigError("config: duplicate key '" + key + "' in [" + current + "]");
        }
    }
    return raw;
}

class SectionReader {
public:
    SectionReader(const RawConfig& raw, const std::string& name) : name_(name) {
        const auto it = raw.sections.find(name);
        if (it != raw.sections.end()) {
            entries_ = &it->second;
        }
    }

    bool present() const { return entries_ != nullptr; }
    bool has(const std::string& key) const { return entries_ && entries_->count(key) > 0; }

    double number(const std::string& key) {
        used_.insert(key);
        return parse_double(entries_->at(key), "[" + name_ + "] " + key);
    }

    std::vector<double> list(const std::string& key) {
        used_.insert(key);
        return parse_list(entries_->at(key), "[" + name_ + "] " + key);
    }

    void reject_unknown() const {
        if (!entries_) {
            return;
        }
        for (const auto& [key, value] : *entries_) {
            if (used_.count(key) == 0) {
                throw ConfigError("config: unknown key '" + key + "' in [" + name_ + "]");
            }
        }
    }

private:
    std::string name_;
    const std::map<std::string, std::string>* entries_ = nullptr;
    std::set<std::string> used_;
};

} // namespace

void VerificationConfig::validate() const {
    if (!(sigma_lower_sq > 0.0) || !std::isfinite(sigma_lower_sq)) {
        throw ConfigError("config: sigma_lower_sq must be positive and finite");
    }
    if (sigma_upper_sq_grid.empty() || lambda_grid.empty() || rho_grid.empty()) {
        throw ConfigError("config: grids must be non-empty");
    }
    for (double v : sigma_upper_sq_grid) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ConfigError("config: sigma-bar grid entries must be positive and finite");
        }
    }
    for (double v : rho_grid) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ConfigError("config: rho values must be positive and finite");
        }
    }
    for (double v : lambda_grid) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ConfigError("config: lambda values must be nonnegative and finite");
        }
    }
    if (!std::isfinite(x_test)) {
        throw ConfigError("config: x_test must be finite");
    }
    if (!(epsilon > 0.0)) {
        throw ConfigError("config: epsilon must be > 0");
    }
    if (n_samples < 100) {
        throw ConfigError("config: N must be >= 100");
    }
}

AmbiguityBounds VerificationConfig::bounds_for(double sigma_upper_sq) const {
    return AmbiguityBounds(std::min(sigma_lower_sq, sigma_upper_sq), sigma_upper_sq);
}

double VerificationConfig::scalar_lambda() const {
    if (lambda_is_grid || lambda_grid.size() != 1) {
        throw ConfigError("config: this mode needs a scalar lambda, not lambda_grid");
    }
    return lambda_grid.front();
}

double VerificationConfig::scalar_rho() const {
    if (rho_is_grid || rho_grid.size() != 1) {
        throw ConfigError("config: this mode needs a scalar rho, not rho_grid");
    }
    return rho_grid.front();
}

double VerificationConfig::scalar_sigma_upper_sq() const {
    if (sigma_is_grid || sigma_upper_sq_grid.size() != 1) {
        throw ConfigError("config: this mode needs sigma_upper_sq, not sigma_upper_grid");
    }
    return sigma_upper_sq_grid.front();
}

VerificationConfig parse_config(std::string_view text) {
    const RawConfig raw = tokenize(text);
    for (const auto& [name, entries] : raw.sections) {
        if (name != "model" && name != "ambiguity" && name != "agent" && name != "test") {
            throw ConfigError("config: unknown section [" + name + "]");
        }
    }

    VerificationConfig cfg;

    SectionReader model(raw, "model");
    if (!model.present()) {
        throw ConfigError("config: missing [model] section");
    }
    for (const char* key : {"A", "F", "C", "D", "M", "I", "K", "P", "Q"}) {
        if (!model.has(key)) {
            throw ConfigError(std::string("config: [model] missing key ") + key);
        }
    }
    cfg.model.A = model.number("A");
    cfg.model.F = model.number("F");
    cfg.model.C = model.number("C");
    cfg.model.D = model.number("D");
    cfg.model.M = model.number("M");
    cfg.model.I = model.number("I");
    cfg.model.K = model.number("K");
    cfg.model.P = model.number("P");
    cfg.model.Q = model.number("Q");
    model.reject_unknown();

    SectionReader ambiguity(raw, "ambiguity");
    if (!ambiguity.present()) {
        throw ConfigError("config: missing [ambiguity] section");
    }
    if (!ambiguity.has("sigma_lower_sq")) {
        throw ConfigError("config: [ambiguity] missing sigma_lower_sq");
    }
    cfg.sigma_lower_sq = ambiguity.number("sigma_lower_sq");
    const bool has_scalar_upper = ambiguity.has("sigma_upper_sq");
    const bool has_grid_upper = ambiguity.has("sigma_upper_grid");
    if (has_scalar_upper == has_grid_upper) {
        throw ConfigError(
            "config: [ambiguity] needs exactly one of sigma_upper_sq | sigma_upper_grid");
    }
    if (has_scalar_upper) {
        cfg.sigma_upper_sq_grid = {ambiguity.number("sigma_upper_sq")};
        cfg.sigma_is_grid = false;
    } else {
        for (double sigma_bar : ambiguity.list("sigma_upper_grid")) {
            cfg.sigma_upper_sq_grid.push_back(sigma_bar * sigma_bar);
        }
        cfg.sigma_is_grid = true;
    }
    ambiguity.reject_unknown();

    SectionReader agent(raw, "agent");
    if (!agent.present()) {
        throw ConfigError("config: missing [agent] section");
    }
    const bool has_lambda = agent.has("lambda");
    const bool has_lambda_grid = agent.has("lambda_grid");
    if (has_lambda == has_lambda_grid) {
        throw ConfigError("config: [agent] needs exactly one of lambda | lambda_grid");
    }
    if (has_lambda) {
        cfg.lambda_grid = {agent.number("lambda")};
        cfg.lambda_is_grid = false;
    } else {
        cfg.lambda_grid = agent.list("lambda_grid");
        cfg.lambda_is_grid = true;
    }
    const bool has_rho = agent.has("rho");
    const bool has_rho_grid = agent.has("rho_grid");
    if (has_rho == has_rho_grid) {
        throw ConfigError("config: [agent] needs exactly one of rho | rho_grid");
    }
    if (has_rho) {
        cfg.rho_grid = {agent.number("rho")};
        cfg.rho_is_grid = false;
    } else {
        cfg.rho_grid = agent.list("rho_grid");
        cfg.rho_is_grid = true;
    }
    agent.reject_unknown();

    SectionReader test(raw, "test");
    if (test.present()) {
        if (test.has("x_test")) {
            cfg.x_test = test.number("x_test");
        }
        if (test.has("epsilon")) {
            cfg.epsilon = test.number("epsilon");
        }
        if (test.has("N")) {
            const double n = test.number("N");
            if (!(n >= 1.0) || n != std::floor(n)) {
                throw ConfigError("config: [test] N must be a positive integer");
            }
            cfg.n_samples = static_cast<std::size_t>(n);
        }
        test.reject_unknown();
    }

    cfg.validate();
    return cfg;
}

VerificationConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config: cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace exlq

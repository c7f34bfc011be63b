#include "opcalc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace opcalc {

ConfigError::ConfigError(int line, const std::string& what)
    : DomainError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_number(const std::string& text, int line) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v))
        throw ConfigError(line, "expected a number, got '" + t + "'");
    return v;
}

/// Plain number, or [a*]pi[/b].
double parse_angle(const std::string& text, int line) {
    std::string t = trim(text);
    const auto at = t.find("pi");
    if (at == std::string::npos) return parse_number(t, line);
    double a = 1.0, b = 1.0;
    const std::string head = trim(t.substr(0, at)), tail = trim(t.substr(at + 2));
    if (!head.empty()) {
        if (head.back() != '*') throw ConfigError(line, "expected a*pi/b, got '" + t + "'");
        a = parse_number(head.substr(0, head.size() - 1), line);
    }
    if (!tail.empty()) {
        if (tail.front() != '/') throw ConfigError(line, "expected a*pi/b, got '" + t + "'");
        b = parse_number(tail.substr(1), line);
        if (b == 0.0) throw ConfigError(line, "division by zero in '" + t + "'");
    }
    return a * pi / b;
}

int parse_int(const std::string& text, int line) {
    const std::string t = trim(text);
    int v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ConfigError(line, "expected an integer, got '" + t + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& text, int line) {
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw ConfigError(line, "expected a nonnegative integer, got '" + t + "'");
    return v;
}

void require(bool ok, int line, const std::string& what) {
    if (!ok) throw ConfigError(line, what);
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;

const std::map<std::string, std::map<std::string, Setter>>& setters() {
    static const std::map<std::string, std::map<std::string, Setter>> table = {
        {"problem",
         {{"p", [](RunConfig& c, const std::string& v, int l) { c.params.p = parse_number(v, l); }},
          {"omega", [](RunConfig& c, const std::string& v, int l) { c.params.omega = parse_angle(v, l); }},
          {"k", [](RunConfig& c, const std::string& v, int l) { c.params.k = parse_number(v, l); }},
          {"rho", [](RunConfig& c, const std::string& v, int l) { c.params.rho = parse_number(v, l); }},
          {"nu",
           [](RunConfig&, const std::string&, int l) {
               throw ConfigError(l, "nu cannot be set; it is derived from p as 3 - 2/p");
           }}}},
        {"grid",
         {{"n_theta", [](RunConfig& c, const std::string& v, int l) { c.n_theta = parse_int(v, l); }},
          {"n_t", [](RunConfig& c, const std::string& v, int l) { c.n_t = parse_int(v, l); }},
          {"T", [](RunConfig& c, const std::string& v, int l) { c.T = parse_number(v, l); }}}},
        {"contour",
         {{"nu_prime",
           [](RunConfig& c, const std::string& v, int l) {
               if (trim(v) == "auto") c.nu_prime.reset();
               else c.nu_prime = parse_number(v, l);
           }},
          {"n_nodes", [](RunConfig& c, const std::string& v, int l) { c.n_nodes = parse_int(v, l); }},
          {"s_max", [](RunConfig& c, const std::string& v, int l) { c.s_max = parse_number(v, l); }}}},
        {"tolerances",
         {{"root_tol", [](RunConfig& c, const std::string& v, int l) { c.root_tol = parse_number(v, l); }},
          {"fp_tol", [](RunConfig& c, const std::string& v, int l) { c.fp_tol = parse_number(v, l); }},
          {"quad_tol", [](RunConfig& c, const std::string& v, int l) { c.quad_tol = parse_number(v, l); }},
          {"decay_tol", [](RunConfig& c, const std::string& v, int l) { c.decay_tol = parse_number(v, l); }}}},
        {"run",
         {{"seed", [](RunConfig& c, const std::string& v, int l) { c.seed = parse_u64(v, l); }},
          {"output_dir",
           [](RunConfig& c, const std::string& v, int l) {
               c.output_dir = trim(v);
               require(!c.output_dir.empty(), l, "output_dir must not be empty");
           }}}},
    };
    return table;
}

// Range checks tied to the line that set the value, so errors point at the offending text.
void check_range(const RunConfig& c, const std::string& section, const std::string& key, int line) {
    const std::string name = section + "." + key;
    try {
        if (section == "problem") c.params.validate();
    } catch (const DomainError& e) {
        throw ConfigError(line, name + ": " + e.what());
    }
    if (name == "grid.n_theta") require(c.n_theta >= 7, line, "grid.n_theta must be at least 7");
    if (name == "grid.n_t") require(c.n_t >= 5, line, "grid.n_t must be at least 5");
    if (name == "grid.T") require(c.T > 0.0, line, "grid.T must be positive");
    if (name == "contour.n_nodes")
        require(c.n_nodes >= 2 && c.n_nodes % 2 == 0, line, "contour.n_nodes must be a positive even number");
    if (name == "contour.s_max") require(c.s_max > 0.0, line, "contour.s_max must be positive");
    if (name == "contour.nu_prime" && c.nu_prime)
        require(*c.nu_prime > c.params.nu(), line, "contour.nu_prime must exceed nu = 3 - 2/p");
    if (section == "tolerances") {
        const double v = key == "root_tol" ? c.root_tol
                         : key == "fp_tol" ? c.fp_tol
                         : key == "quad_tol" ? c.quad_tol
                                             : c.decay_tol;
        require(v > 0.0, line, name + " must be positive");
    }
}

void assign(RunConfig& cfg, const std::string& section, const std::string& key, const std::string& value,
            int line) {
    const auto& table = setters();
    const auto s = table.find(section);
    if (s == table.end()) throw ConfigError(line, "unknown section [" + section + "]");
    const auto k = s->second.find(key);
    if (k == s->second.end()) throw ConfigError(line, "unknown key '" + key + "' in section [" + section + "]");
    k->second(cfg, value, line);
    check_range(cfg, section, key, line);
}

}  // namespace

void RunConfig::validate() const {
    try {
        params.validate();
    } catch (const DomainError& e) {
        throw ConfigError(0, std::string("problem: ") + e.what());
    }
    require(n_theta >= 7, 0, "grid.n_theta must be at least 7");
    require(n_t >= 5, 0, "grid.n_t must be at least 5");
    require(T > 0.0, 0, "grid.T must be positive");
    require(n_nodes >= 2 && n_nodes % 2 == 0, 0, "contour.n_nodes must be a positive even number");
    require(s_max > 0.0, 0, "contour.s_max must be positive");
    require(!nu_prime || *nu_prime > params.nu(), 0, "contour.nu_prime must exceed nu = 3 - 2/p");
    require(root_tol > 0 && fp_tol > 0 && quad_tol > 0 && decay_tol > 0, 0, "tolerances must be positive");
    require(!output_dir.empty(), 0, "run.output_dir must not be empty");
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
    return {
        {"problem.p", format_double(params.p)},
        {"problem.omega", format_double(params.omega)},
        {"problem.k", format_double(params.k)},
        {"problem.rho", format_double(params.rho)},
        {"problem.nu", format_double(params.nu())},
        {"grid.n_theta", std::to_string(n_theta)},
        {"grid.n_t", std::to_string(n_t)},
        {"grid.T", format_double(T)},
        {"contour.nu_prime", nu_prime ? format_double(*nu_prime) : "auto"},
        {"contour.n_nodes", std::to_string(n_nodes)},
        {"contour.s_max", format_double(s_max)},
        {"tolerances.root_tol", format_double(root_tol)},
        {"tolerances.fp_tol", format_double(fp_tol)},
        {"tolerances.quad_tol", format_double(quad_tol)},
        {"tolerances.decay_tol", format_double(decay_tol)},
        {"run.seed", std::to_string(seed)},
        {"run.output_dir", output_dir},
    };
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw, section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s.front() == '#' || s.front() == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(line, "unterminated section header '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            if (!setters().count(section)) throw ConfigError(line, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(line, "expected 'key = value', got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        std::string value = s.substr(eq + 1);
        const auto hash = value.find('#');
        if (hash != std::string::npos) value = value.substr(0, hash);
        if (key.empty()) throw ConfigError(line, "missing key before '='");
        if (section.empty()) throw ConfigError(line, "key '" + key + "' appears before any [section] header");
        if (trim(value).empty()) throw ConfigError(line, "missing value for '" + key + "'");
        assign(cfg, section, key, value, line);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError(0, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
        throw ConfigError(0, "override must look like section.key=value, got '" + assignment + "'");
    assign(cfg, trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
           assignment.substr(eq + 1), 0);
    cfg.validate();
}

}  // namespace opcalc

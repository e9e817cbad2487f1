#include "specbranch/config.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "specbranch/errors.hpp"
#include "specbranch/family.hpp"

namespace specbranch {

namespace {

std::string trim(const std::string& s)
{
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(int line, const std::string& message)
{
    throw ConfigError("line " + std::to_string(line) + ": " + message);
}

double to_double(const std::string& text, int line, const std::string& key)
{
    const std::string s = trim(text);
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
        fail(line, "'" + key + "' expects a number, got '" + s + "'");
    }
    return v;
}

long long to_integer(const std::string& text, int line, const std::string& key)
{
    const std::string s = trim(text);
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0' || errno == ERANGE) {
        fail(line, "'" + key + "' expects an integer, got '" + s + "'");
    }
    return v;
}

int to_int(const std::string& text, int line, const std::string& key)
{
    const long long v = to_integer(text, line, key);
    if (v < -1000000000LL || v > 1000000000LL) fail(line, "'" + key + "' is out of range");
    return static_cast<int>(v);
}

std::vector<std::string> split_list(const std::string& text, int line, const std::string& key)
{
    std::vector<std::string> items;
    if (trim(text).empty()) return items;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(line, "empty item in list '" + key + "'");
        items.push_back(item);
    }
    if (!text.empty() && text.back() == ',') fail(line, "empty item in list '" + key + "'");
    return items;
}

bool to_bool(const std::string& text, int line, const std::string& key)
{
    const std::string s = trim(text);
    if (s == "true") return true;
    if (s == "false") return false;
    fail(line, "'" + key + "' expects true or false, got '" + s + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&, int, const std::string&)>;

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"command", [](RunConfig& c, const std::string& v, int, const std::string&) { c.command = trim(v); }},
        {"seed",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) {
             const std::string text = trim(v);
             const char* first = text.data();
             const char* last = first + text.size();
             const auto [end, ec] = std::from_chars(first, last, c.seed);
             if (text.empty() || ec != std::errc() || end != last) {
                 fail(line, "'" + key + "' expects a non-negative 64-bit integer, got '" + text + "'");
             }
         }},
        {"output", [](RunConfig& c, const std::string& v, int, const std::string&) { c.output = trim(v); }},
        {"family.name", [](RunConfig& c, const std::string& v, int, const std::string&) { c.family.name = trim(v); }},
        {"family.dimension",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.family.dimension = to_int(v, line, key); }},
        {"family.entries",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.family.entries = split_list(v, line, key); }},
        {"family.n_max",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.family.n_max = to_int(v, line, key); }},
        {"family.m",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.family.m = to_int(v, line, key); }},
        {"family.potential", [](RunConfig& c, const std::string& v, int, const std::string&) { c.family.potential = trim(v); }},
        {"grid.t_range",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) {
             const auto items = split_list(v, line, key);
             if (items.size() != 2) fail(line, "'t_range' needs two values t0, t1");
             c.grid.t_range = std::make_pair(to_double(items[0], line, key), to_double(items[1], line, key));
         }},
        {"grid.grid_size",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.grid.grid_size = to_int(v, line, key); }},
        {"grid.order",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.grid.order = to_int(v, line, key); }},
        {"contour.center",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.contour.center = to_double(v, line, key); }},
        {"contour.radius",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.contour.radius = to_double(v, line, key); }},
        {"contour.nodes",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.contour.nodes = to_int(v, line, key); }},
        {"contour.t",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.contour.t = to_double(v, line, key); }},
        {"tolerances.hermitian",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.tolerances.hermitian = to_double(v, line, key); }},
        {"tolerances.eig",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.tolerances.eig = to_double(v, line, key); }},
        {"tolerances.solve",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.tolerances.solve = to_double(v, line, key); }},
        {"tolerances.projector",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.tolerances.projector = to_double(v, line, key); }},
        {"tolerances.cluster",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.tolerances.cluster = to_double(v, line, key); }},
        {"tolerances.derivative",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.tolerances.derivative = to_double(v, line, key); }},
        {"tolerances.derivative_tie",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.tolerances.derivative_tie = to_double(v, line, key); }},
        {"tolerances.fd_first",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.tolerances.fd_first = to_double(v, line, key); }},
        {"tolerances.fd_second",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.tolerances.fd_second = to_double(v, line, key); }},
        {"holder.n",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) {
             c.holder.n.clear();
             for (const auto& item : split_list(v, line, key)) c.holder.n.push_back(to_int(item, line, key));
         }},
        {"holder.alpha",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.holder.alpha = to_double(v, line, key); }},
        {"holder.prefactor",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.holder.prefactor = to_bool(v, line, key); }},
        {"resolvent.m",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.resolvent.m = to_int(v, line, key); }},
        {"resolvent.K",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.resolvent.K = to_int(v, line, key); }},
        {"resolvent.t",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) {
             c.resolvent.t.clear();
             for (const auto& item : split_list(v, line, key)) c.resolvent.t.push_back(to_double(item, line, key));
         }},
        {"extend.given",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.extend.given = split_list(v, line, key); }},
        {"extend.tolerance",
         [](RunConfig& c, const std::string& v, int line, const std::string& key) { c.extend.tolerance = to_double(v, line, key); }},
    };
    return table;
}

const std::set<std::string> sections = {"family", "grid", "contour", "tolerances",
                                        "holder", "resolvent", "extend"};

std::string number(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F format)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ", ";
        out += format(items[i]);
    }
    return out;
}

} // namespace

RunConfig parse_config(const std::string& text)
{
    RunConfig config;
    std::map<std::string, int> seen;
    std::string section;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto comment = raw.find_first_of("#;");
        const std::string content = trim(comment == std::string::npos ? raw : raw.substr(0, comment));
        if (content.empty()) continue;
        if (content.front() == '[') {
            if (content.back() != ']') fail(line, "unterminated section header");
            section = trim(content.substr(1, content.size() - 2));
            if (!sections.count(section)) fail(line, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = content.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value");
        std::string key = trim(content.substr(0, eq));
        if (key.empty()) fail(line, "missing key before '='");
        // `family = name` at top level is shorthand for [family] name.
        const std::string full = section.empty() && key == "family" ? "family.name"
                                 : section.empty()                  ? key
                                                                    : section + "." + key;
        const auto setter = setters().find(full);
        if (setter == setters().end()) fail(line, "unknown key '" + full + "'");
        if (const auto prev = seen.find(full); prev != seen.end()) {
            fail(line, "duplicate key '" + full + "' (first set on line " +
                           std::to_string(prev->second) + ")");
        }
        seen[full] = line;
        setter->second(config, content.substr(eq + 1), line, full);
    }
    validate(config);
    return config;
}

void validate(const RunConfig& c)
{
    static const std::set<std::string> commands = {"track",
                                                   "project",
                                                   "counterexample-holder",
                                                   "counterexample-resolvent",
                                                   "schrodinger",
                                                   "extend"};
    static const std::set<std::string> families = {"expr", "curve-lemma", "resolvent-example",
                                                   "schrodinger"};
    auto bad = [](const std::string& message) { throw ConfigError(message); };

    if (!commands.count(c.command)) bad("unknown command '" + c.command + "'");
    if (c.output.empty()) bad("output directory must not be empty");
    const bool needs_family = c.command == "track" || c.command == "project" || c.command == "extend";
    if (needs_family && c.family.name.empty()) bad("command '" + c.command + "' needs [family] name");
    if (!c.family.name.empty() && !families.count(c.family.name)) {
        bad("unknown family '" + c.family.name + "'");
    }
    if (c.command == "schrodinger" && !c.family.name.empty() && c.family.name != "schrodinger") {
        bad("command 'schrodinger' uses the schrodinger family, not '" + c.family.name + "'");
    }
    if (c.grid.t_range && !(c.grid.t_range->first < c.grid.t_range->second)) {
        bad("t_range must satisfy t0 < t1");
    }
    if (c.grid.grid_size < 2) bad("grid_size must be at least 2");
    if (c.grid.order != 1 && c.grid.order != 2) bad("order must be 1 or 2");
    if (c.contour.nodes < 8) bad("contour nodes must be at least 8");
    if (c.contour.center.has_value() != c.contour.radius.has_value()) {
        bad("contour center and radius must be given together");
    }
    if (c.contour.radius && !(*c.contour.radius > 0.0)) bad("contour radius must be positive");
    const ToleranceConfig& t = c.tolerances;
    for (double v : {t.hermitian, t.eig, t.solve, t.projector, t.cluster, t.derivative,
                     t.derivative_tie, t.fd_first, t.fd_second, c.extend.tolerance}) {
        if (!(v > 0.0)) bad("all tolerances must be positive");
    }
    if (c.family.n_max < 2 || c.family.n_max > 31) bad("n_max must be in 2..31");
    if (c.family.m < 0) bad("m must be positive");
    if (c.holder.n.empty()) bad("[holder] n must list at least one window");
    for (int n : c.holder.n) {
        if (n < 1 || n > 31) bad("[holder] n values must be in 1..31");
    }
    if (!(c.holder.alpha > 0.0)) bad("[holder] alpha must be positive");
    if (c.resolvent.m < 1) bad("[resolvent] m must be at least 1");
    if (c.resolvent.K < 1) bad("[resolvent] K must be at least 1");
    for (double v : c.resolvent.t) {
        if (v == 0.0) bad("[resolvent] t values must be nonzero");
    }
    if (c.command == "extend" && c.extend.given.empty()) bad("[extend] given must list branches");
    try {
        for (const auto& g : c.extend.given) parse_expression(g);
        if (c.family.name == "schrodinger" || c.command == "schrodinger") {
            parse_expression(c.family.potential, true);
        }
        if (c.family.name == "expr") {
            if (c.family.dimension < 1) bad("expr family needs dimension >= 1");
            make_expression_family({c.family.dimension, c.family.entries}).eval(
                c.grid.t_range ? c.grid.t_range->first : 0.0);
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        bad(e.what());
    }
}

std::string serialize(const RunConfig& c)
{
    std::ostringstream out;
    out << "command = " << c.command << "\n";
    out << "seed = " << c.seed << "\n";
    out << "output = " << c.output << "\n";

    out << "\n[family]\n";
    if (!c.family.name.empty()) out << "name = " << c.family.name << "\n";
    out << "dimension = " << c.family.dimension << "\n";
    out << "entries = " << join(c.family.entries, [](const std::string& s) { return s; }) << "\n";
    out << "n_max = " << c.family.n_max << "\n";
    out << "m = " << c.family.m << "\n";
    out << "potential = " << c.family.potential << "\n";

    out << "\n[grid]\n";
    if (c.grid.t_range) {
        out << "t_range = " << number(c.grid.t_range->first) << ", "
            << number(c.grid.t_range->second) << "\n";
    }
    out << "grid_size = " << c.grid.grid_size << "\n";
    out << "order = " << c.grid.order << "\n";

    out << "\n[contour]\n";
    if (c.contour.center) out << "center = " << number(*c.contour.center) << "\n";
    if (c.contour.radius) out << "radius = " << number(*c.contour.radius) << "\n";
    out << "nodes = " << c.contour.nodes << "\n";
    if (c.contour.t) out << "t = " << number(*c.contour.t) << "\n";

    const ToleranceConfig& t = c.tolerances;
    out << "\n[tolerances]\n";
    out << "hermitian = " << number(t.hermitian) << "\n";
    out << "eig = " << number(t.eig) << "\n";
    out << "solve = " << number(t.solve) << "\n";
    out << "projector = " << number(t.projector) << "\n";
    out << "cluster = " << number(t.cluster) << "\n";
    out << "derivative = " << number(t.derivative) << "\n";
    out << "derivative_tie = " << number(t.derivative_tie) << "\n";
    out << "fd_first = " << number(t.fd_first) << "\n";
    out << "fd_second = " << number(t.fd_second) << "\n";

    out << "\n[holder]\n";
    out << "n = " << join(c.holder.n, [](int n) { return std::to_string(n); }) << "\n";
    out << "alpha = " << number(c.holder.alpha) << "\n";
    out << "prefactor = " << (c.holder.prefactor ? "true" : "false") << "\n";

    out << "\n[resolvent]\n";
    out << "m = " << c.resolvent.m << "\n";
    out << "K = " << c.resolvent.K << "\n";
    out << "t = " << join(c.resolvent.t, number) << "\n";

    out << "\n[extend]\n";
    out << "given = " << join(c.extend.given, [](const std::string& s) { return s; }) << "\n";
    out << "tolerance = " << number(c.extend.tolerance) << "\n";
    return out.str();
}

} // namespace specbranch

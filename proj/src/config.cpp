#include "landval/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "landval/errors.hpp"

namespace landval {

namespace {

[[noreturn]] void cfg_fail(const std::string& msg) { fail(errc::config, msg); }

[[noreturn]] void key_fail(const std::string& section, const std::string& key, int line,
                           const std::string& detail) {
    std::ostringstream os;
    os << section << "." << key << ": " << detail << " (line " << line << ")";
    cfg_fail(os.str());
}

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

struct Doc {
    std::map<std::string, std::map<std::string, Entry>> sections;
    std::map<std::string, int> section_lines;
};

Doc scan(const std::string& text) {
    Doc doc;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                cfg_fail("unterminated section header (line " + std::to_string(line_no) + ")");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                cfg_fail("empty section name (line " + std::to_string(line_no) + ")");
            if (doc.sections.count(section))
                cfg_fail("duplicate section [" + section + "] (line " + std::to_string(line_no) +
                         ")");
            doc.sections[section];
            doc.section_lines[section] = line_no;
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            cfg_fail("expected key = value (line " + std::to_string(line_no) + ")");
        if (section.empty())
            cfg_fail("key before any section header (line " + std::to_string(line_no) + ")");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            cfg_fail("empty key or value (line " + std::to_string(line_no) + ")");
        auto& sec = doc.sections[section];
        if (sec.count(key))
            cfg_fail(section + "." + key + ": duplicate key (line " + std::to_string(line_no) +
                     ")");
        sec[key] = Entry{value, line_no, false};
    }
    return doc;
}

double strict_double(const std::string& s, const std::string& section, const std::string& key,
                     int line) {
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v))
        key_fail(section, key, line, "expected a finite number, got \"" + s + "\"");
    return v;
}

// Scalars accept fraction syntax like 2/3 so stochastic matrices stay exact.
double number_text(const std::string& s, const std::string& section, const std::string& key,
                   int line) {
    std::size_t slash = s.find('/');
    if (slash == std::string::npos) return strict_double(s, section, key, line);
    std::string num = trim(s.substr(0, slash));
    std::string den = trim(s.substr(slash + 1));
    if (num.empty() || den.empty() || den.find('/') != std::string::npos)
        key_fail(section, key, line, "malformed fraction \"" + s + "\"");
    double d = strict_double(den, section, key, line);
    if (d == 0.0) key_fail(section, key, line, "fraction with zero denominator");
    return strict_double(num, section, key, line) / d;
}

class SectionReader {
public:
    SectionReader(Doc& doc, std::string name)
        : name_(std::move(name)),
          sec_(doc.sections.count(name_) ? &doc.sections.at(name_) : nullptr) {}

    bool present() const { return sec_ != nullptr; }

    Entry* find(const std::string& key) const {
        if (!sec_) return nullptr;
        auto it = sec_->find(key);
        if (it == sec_->end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    Entry& require(const std::string& key) const {
        Entry* e = find(key);
        if (!e)
            cfg_fail(name_ + "." + key + ": missing required key" +
                     (sec_ ? "" : " (section [" + name_ + "] absent)"));
        return *e;
    }

    double number(const std::string& key, double fallback) const {
        Entry* e = find(key);
        return e ? number_text(e->value, name_, key, e->line) : fallback;
    }

    double require_number(const std::string& key) const {
        Entry& e = require(key);
        return number_text(e.value, name_, key, e.line);
    }

    long integer(const std::string& key, long fallback) const {
        Entry* e = find(key);
        if (!e) return fallback;
        const char* begin = e->value.c_str();
        char* end = nullptr;
        errno = 0;
        long v = std::strtol(begin, &end, 10);
        if (end == begin || *end != '\0' || errno == ERANGE)
            key_fail(name_, key, e->line, "expected an integer, got \"" + e->value + "\"");
        return v;
    }

    std::uint64_t u64(const std::string& key, std::uint64_t fallback) const {
        Entry* e = find(key);
        if (!e) return fallback;
        const char* begin = e->value.c_str();
        char* end = nullptr;
        errno = 0;
        unsigned long long v = std::strtoull(begin, &end, 10);
        if (end == begin || *end != '\0' || errno == ERANGE || e->value.front() == '-')
            key_fail(name_, key, e->line,
                     "expected an unsigned integer, got \"" + e->value + "\"");
        return static_cast<std::uint64_t>(v);
    }

    std::string text(const std::string& key, const std::string& fallback) const {
        Entry* e = find(key);
        return e ? e->value : fallback;
    }

    // Row-major matrix: ';' separates rows, whitespace or ',' separates
    // entries; every entry may use fraction syntax.
    std::vector<double> matrix(const std::string& key, int expected_rows,
                               int expected_cols) const {
        Entry& e = require(key);
        std::vector<double> out;
        int rows = 0;
        std::size_t pos = 0;
        while (pos <= e.value.size()) {
            std::size_t semi = e.value.find(';', pos);
            std::string row_text = semi == std::string::npos ? e.value.substr(pos)
                                                             : e.value.substr(pos, semi - pos);
            for (char& c : row_text)
                if (c == ',') c = ' ';
            std::istringstream rs(row_text);
            std::string cell;
            int cols = 0;
            while (rs >> cell) {
                out.push_back(number_text(cell, name_, key, e.line));
                ++cols;
            }
            if (cols != expected_cols)
                key_fail(name_, key, e.line,
                         "row " + std::to_string(rows + 1) + " has " + std::to_string(cols) +
                             " entries, expected " + std::to_string(expected_cols));
            ++rows;
            if (semi == std::string::npos) break;
            pos = semi + 1;
        }
        if (rows != expected_rows)
            key_fail(name_, key, e.line,
                     "got " + std::to_string(rows) + " rows, expected " +
                         std::to_string(expected_rows));
        return out;
    }

    void check_range(const std::string& key, double v, bool ok, const char* what) const {
        if (ok) return;
        Entry* e = find(key);
        std::ostringstream os;
        os << "value " << v << " " << what;
        key_fail(name_, key, e ? e->line : 0, os.str());
    }

private:
    std::string name_;
    std::map<std::string, Entry>* sec_;
};

ProductionModel build_technology(const SectionReader& tech) {
    std::string kind = trim(tech.require("kind").value);
    double alpha = tech.require_number("alpha");
    tech.check_range("alpha", alpha, alpha > 0.0 && alpha < 1.0, "is outside (0, 1)");
    if (kind == "ces") {
        double sigma = tech.require_number("sigma");
        tech.check_range("sigma", sigma, sigma > 0.0, "must be positive");
        return ProductionModel::ces(alpha, sigma);
    }
    if (kind == "cobb_douglas") return ProductionModel::cobb_douglas(alpha);
    if (kind == "two_sector") {
        double a1 = tech.require_number("a1");
        double a2 = tech.require_number("a2");
        tech.check_range("a1", a1, a1 > 0.0, "must be positive");
        tech.check_range("a2", a2, a2 > 0.0, "must be positive");
        return ProductionModel::two_sector(alpha, a1, a2);
    }
    if (kind == "urban") {
        UrbanParams p;
        p.alpha = alpha;
        p.theta = tech.require_number("theta");
        p.sigma_e = tech.require_number("sigma_e");
        p.alpha_e = tech.require_number("alpha_e");
        p.a1 = tech.number("a1", 1.0);
        p.a2 = tech.number("a2", 1.0);
        p.a3 = tech.number("a3", 1.0);
        tech.check_range("theta", p.theta, p.theta > 0.0 && p.theta < 1.0, "is outside (0, 1)");
        tech.check_range("sigma_e", p.sigma_e, p.sigma_e > 0.0, "must be positive");
        tech.check_range("alpha_e", p.alpha_e, p.alpha_e > 0.0 && p.alpha_e < 1.0,
                         "is outside (0, 1)");
        tech.check_range("a1", p.a1, p.a1 > 0.0, "must be positive");
        tech.check_range("a2", p.a2, p.a2 > 0.0, "must be positive");
        tech.check_range("a3", p.a3, p.a3 > 0.0, "must be positive");
        return ProductionModel::urban(p);
    }
    cfg_fail("technology.kind: unknown kind \"" + kind +
             "\" (expected ces, cobb_douglas, two_sector, or urban)");
}

Process build_process(const SectionReader& proc) {
    std::string kind = trim(proc.require("kind").value);
    if (kind == "deterministic") {
        DeterministicExponential d;
        d.g_h = proc.require_number("g_h");
        d.g_x = proc.require_number("g_x");
        d.a_h0 = proc.number("a_h0", 1.0);
        d.a_x0 = proc.number("a_x0", 1.0);
        proc.check_range("g_h", d.g_h, d.g_h > 0.0, "must be positive");
        proc.check_range("g_x", d.g_x, d.g_x > 0.0, "must be positive");
        proc.check_range("a_h0", d.a_h0, d.a_h0 > 0.0, "must be positive");
        proc.check_range("a_x0", d.a_x0, d.a_x0 > 0.0, "must be positive");
        return Process{d};
    }
    if (kind == "markov") {
        MarkovMultiplicative m;
        long n = proc.integer("n", 0);
        proc.check_range("n", static_cast<double>(n), n >= 1, "must be at least 1");
        m.n = static_cast<int>(n);
        m.pi = proc.matrix("pi", m.n, m.n);
        bool point = proc.find("growth") != nullptr;
        bool logn = proc.find("growth_mu") != nullptr || proc.find("growth_s") != nullptr;
        if (point && logn)
            cfg_fail("process.growth: give either growth or growth_mu/growth_s, not both");
        m.growth.resize(static_cast<std::size_t>(m.n) * m.n);
        if (point) {
            std::vector<double> g = proc.matrix("growth", m.n, m.n);
            for (std::size_t i = 0; i < g.size(); ++i) m.growth[i].g = g[i];
        } else if (logn) {
            std::vector<double> mu = proc.matrix("growth_mu", m.n, m.n);
            std::vector<double> s = proc.matrix("growth_s", m.n, m.n);
            for (std::size_t i = 0; i < mu.size(); ++i) {
                m.growth[i].lognormal = true;
                m.growth[i].mu = mu[i];
                m.growth[i].s = s[i];
            }
        } else {
            cfg_fail("process.growth: missing required key");
        }
        long state = proc.integer("initial_state", 1);  // 1-based in the file
        proc.check_range("initial_state", static_cast<double>(state), state >= 1 && state <= n,
                         "is outside 1..n");
        m.n0 = static_cast<int>(state - 1);
        m.a0 = proc.number("a0", 1.0);
        proc.check_range("a0", m.a0, m.a0 > 0.0, "must be positive");
        try {
            m.validate();
        } catch (const Error& e) {
            cfg_fail(std::string("process: ") + e.what());
        }
        return Process{m};
    }
    cfg_fail("process.kind: unknown kind \"" + kind + "\" (expected deterministic or markov)");
}

}  // namespace

const ProductionModel& RunConfig::require_model() const {
    if (!model) cfg_fail("this command needs a [technology] section");
    return *model;
}

const Process& RunConfig::require_process() const {
    if (!process) cfg_fail("this command needs a [process] section");
    return *process;
}

RunConfig parse_config(const std::string& text) {
    RunConfig rc;
    rc.source_text = text;
    Doc doc = scan(text);

    for (const auto& [name, line] : doc.section_lines)
        if (name != "technology" && name != "process" && name != "preferences" &&
            name != "valuation" && name != "run")
            cfg_fail("unknown section [" + name + "] (line " + std::to_string(line) + ")");

    SectionReader tech(doc, "technology");
    SectionReader proc(doc, "process");
    SectionReader pref(doc, "preferences");
    SectionReader val(doc, "valuation");
    SectionReader run(doc, "run");

    if (tech.present()) rc.model = build_technology(tech);
    if (proc.present()) rc.process = build_process(proc);

    rc.beta = pref.number("beta", rc.beta);
    pref.check_range("beta", rc.beta, rc.beta > 0.0 && rc.beta < 1.0, "is outside (0, 1)");

    rc.val_horizon = val.integer("horizon", rc.val_horizon);
    val.check_range("horizon", static_cast<double>(rc.val_horizon), rc.val_horizon >= 1,
                    "must be at least 1");
    rc.n_paths = val.integer("n_paths", rc.n_paths);
    val.check_range("n_paths", static_cast<double>(rc.n_paths), rc.n_paths >= 1,
                    "must be at least 1");
    rc.tail_tolerance = val.number("tail_tolerance", rc.tail_tolerance);
    val.check_range("tail_tolerance", rc.tail_tolerance, rc.tail_tolerance > 0.0,
                    "must be positive");
    rc.mrt_threshold = val.number("mrt_threshold", rc.mrt_threshold);
    rc.se_band = val.number("se_band", rc.se_band);
    val.check_range("se_band", rc.se_band, rc.se_band > 0.0, "must be positive");

    rc.seed = run.u64("seed", rc.seed);
    rc.horizon = static_cast<int>(run.integer("horizon", rc.horizon));
    run.check_range("horizon", static_cast<double>(rc.horizon), rc.horizon >= 1,
                    "must be at least 1");
    rc.stride = static_cast<int>(run.integer("stride", rc.stride));
    run.check_range("stride", static_cast<double>(rc.stride), rc.stride >= 1,
                    "must be at least 1");
    rc.parallelism = static_cast<int>(run.integer("parallelism", rc.parallelism));
    run.check_range("parallelism", static_cast<double>(rc.parallelism), rc.parallelism >= 1,
                    "must be at least 1");
    rc.scenario = run.text("scenario", "");
    if (Entry* e = run.find("g1")) rc.g1 = number_text(e->value, "run", "g1", e->line);
    if (Entry* e = run.find("g2")) rc.g2 = number_text(e->value, "run", "g2", e->line);
    if (rc.g1) run.check_range("g1", *rc.g1, *rc.g1 > 0.0, "must be positive");
    if (rc.g2) run.check_range("g2", *rc.g2, *rc.g2 > 0.0, "must be positive");

    for (const auto& [sname, entries] : doc.sections)
        for (const auto& [key, entry] : entries)
            if (!entry.used)
                cfg_fail(sname + "." + key + ": unknown key (line " +
                         std::to_string(entry.line) + ")");
    return rc;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) cfg_fail("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace landval

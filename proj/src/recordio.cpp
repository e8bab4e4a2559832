#include "snstf/recordio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace snstf {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::int64_t parse_i64(const IniDoc::Entry& e, const std::string& where) {
    std::int64_t v = 0;
    const auto* first = e.value.data();
    const auto* last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw ParseError(where, e.line, "expected integer for '" + e.key + "'");
    return v;
}

double parse_f64(const IniDoc::Entry& e, const std::string& where) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return v;
    } catch (const std::exception&) {
        throw ParseError(where, e.line, "expected number for '" + e.key + "'");
    }
}

// walks a section, dispatching each key through a setter map and rejecting
// anything it does not know
template <typename Setter>
void consume_section(const IniDoc::Section& sec, const std::string& where,
                     const std::map<std::string, Setter>& setters) {
    for (const auto& e : sec.entries) {
        auto it = setters.find(e.key);
        if (it == setters.end())
            throw ParseError(where, e.line,
                             "unknown key '" + e.key + "' in section [" + sec.name + "]");
        it->second(e);
    }
}

} // namespace

const IniDoc::Section* IniDoc::find(const std::string& name) const {
    for (const auto& s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

IniDoc parse_ini(const std::string& text, const std::string& where) {
    IniDoc doc;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3)
                throw ParseError(where, lineno, "malformed section header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name.empty()) throw ParseError(where, lineno, "empty section name");
            for (const auto& s : doc.sections)
                if (s.name == name)
                    throw ParseError(where, lineno, "duplicate section [" + name + "]");
            doc.sections.push_back({name, lineno, {}});
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError(where, lineno, "expected 'key = value'");
        if (doc.sections.empty())
            throw ParseError(where, lineno, "entry before any [section]");
        IniDoc::Entry e{trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno};
        if (e.key.empty()) throw ParseError(where, lineno, "empty key");
        for (const auto& prev : doc.sections.back().entries)
            if (prev.key == e.key)
                throw ParseError(where, lineno, "duplicate key '" + e.key + "'");
        doc.sections.back().entries.push_back(std::move(e));
    }
    return doc;
}

RecordFile parse_record_file(const std::string& text, const std::string& where) {
    const IniDoc doc = parse_ini(text, where);
    RecordFile rf;
    bool have_record = false;

    for (const auto& sec : doc.sections) {
        using E = IniDoc::Entry;
        if (sec.name == "record") {
            have_record = true;
            std::map<std::string, std::function<void(const E&)>> set;
            set["n_total"] = [&](const E& e) { rf.record.n_total = parse_i64(e, where); };
            set["ds_deg"] = [&](const E& e) { rf.record.ds_deg = parse_f64(e, where); };
            set["eff_freq_hz"] = [&](const E& e) {
                rf.record.eff_freq_hz = parse_f64(e, where);
            };
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    const std::string suffix = std::to_string(a) + std::to_string(b);
                    set["sent_" + suffix] = [&rf, a, b, &where](const E& e) {
                        rf.record.sent[a][b] = parse_i64(e, where);
                    };
                    set["detected_" + suffix] = [&rf, a, b, &where](const E& e) {
                        rf.record.detected[a][b] = parse_i64(e, where);
                    };
                }
            }
            set["detected_11_ds"] = [&](const E& e) {
                rf.record.detected_11_ds = parse_i64(e, where);
            };
            set["correct_11_ds"] = [&](const E& e) {
                rf.record.correct_11_ds = parse_i64(e, where);
            };
            consume_section(sec, where, set);
        } else if (sec.name == "source") {
            rf.source.emplace();
            std::map<std::string, std::function<void(const E&)>> set;
            set["mu_x"] = [&](const E& e) { rf.source->mu_x = parse_f64(e, where); };
            set["mu_y"] = [&](const E& e) { rf.source->mu_y = parse_f64(e, where); };
            set["p_v"] = [&](const E& e) { rf.source->p_v = parse_f64(e, where); };
            set["p_x"] = [&](const E& e) { rf.source->p_x = parse_f64(e, where); };
            set["p_y"] = [&](const E& e) { rf.source->p_y = parse_f64(e, where); };
            consume_section(sec, where, set);
        } else if (sec.name == "security") {
            rf.security.emplace();
            std::map<std::string, std::function<void(const E&)>> set;
            set["f"] = [&](const E& e) { rf.security->f = parse_f64(e, where); };
            set["eps"] = [&](const E& e) { rf.security->eps = parse_f64(e, where); };
            set["eps_cor"] = [&](const E& e) {
                rf.security->eps_cor = parse_f64(e, where);
            };
            set["eps_pa"] = [&](const E& e) { rf.security->eps_pa = parse_f64(e, where); };
            set["eps_hat"] = [&](const E& e) {
                rf.security->eps_hat = parse_f64(e, where);
            };
            consume_section(sec, where, set);
        } else if (sec.name == "aopp") {
            rf.record.aopp_observed.emplace();
            std::map<std::string, std::function<void(const E&)>> set;
            set["n_t_after"] = [&](const E& e) {
                rf.record.aopp_observed->n_t_after = parse_f64(e, where);
            };
            set["e_t_after"] = [&](const E& e) {
                rf.record.aopp_observed->e_t_after = parse_f64(e, where);
            };
            consume_section(sec, where, set);
        } else {
            throw ParseError(where, sec.line, "unknown section [" + sec.name + "]");
        }
    }
    if (!have_record) throw ParseError(where, 1, "missing [record] section");
    rf.record.validate();
    return rf;
}

std::string format_full(double v) {
    if (std::isfinite(v) && std::fabs(v) < 9.0e15 &&
        v == static_cast<double>(static_cast<std::int64_t>(v))) {
        return std::to_string(static_cast<std::int64_t>(v));
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string serialize_record(const RecordFile& rf) {
    std::ostringstream out;
    out << "[record]\n";
    out << "n_total = " << rf.record.n_total << "\n";
    out << "ds_deg = " << format_full(rf.record.ds_deg) << "\n";
    out << "eff_freq_hz = " << format_full(rf.record.eff_freq_hz) << "\n";
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            out << "sent_" << a << b << " = " << rf.record.sent[a][b] << "\n";
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            out << "detected_" << a << b << " = " << rf.record.detected[a][b] << "\n";
    out << "detected_11_ds = " << rf.record.detected_11_ds << "\n";
    out << "correct_11_ds = " << rf.record.correct_11_ds << "\n";
    if (rf.source) {
        out << "\n[source]\n";
        out << "mu_x = " << format_full(rf.source->mu_x) << "\n";
        out << "mu_y = " << format_full(rf.source->mu_y) << "\n";
        out << "p_v = " << format_full(rf.source->p_v) << "\n";
        out << "p_x = " << format_full(rf.source->p_x) << "\n";
        out << "p_y = " << format_full(rf.source->p_y) << "\n";
    }
    if (rf.security) {
        out << "\n[security]\n";
        out << "f = " << format_full(rf.security->f) << "\n";
        out << "eps = " << format_full(rf.security->eps) << "\n";
        out << "eps_cor = " << format_full(rf.security->eps_cor) << "\n";
        out << "eps_pa = " << format_full(rf.security->eps_pa) << "\n";
        out << "eps_hat = " << format_full(rf.security->eps_hat) << "\n";
    }
    if (rf.record.aopp_observed) {
        out << "\n[aopp]\n";
        out << "n_t_after = " << format_full(rf.record.aopp_observed->n_t_after) << "\n";
        out << "e_t_after = " << format_full(rf.record.aopp_observed->e_t_after) << "\n";
    }
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

RecordFile load_record(const std::string& path) {
    return parse_record_file(read_file(path), path);
}

void save_record(const std::string& path, const RecordFile& rf) {
    write_file(path, serialize_record(rf));
}

SimConfig parse_sim_config(const std::string& text, const std::string& where) {
    const IniDoc doc = parse_ini(text, where);
    SimConfig cfg;
    using E = IniDoc::Entry;
    for (const auto& sec : doc.sections) {
        if (sec.name == "source") {
            std::map<std::string, std::function<void(const E&)>> set;
            set["mu_x"] = [&](const E& e) { cfg.src.mu_x = parse_f64(e, where); };
            set["mu_y"] = [&](const E& e) { cfg.src.mu_y = parse_f64(e, where); };
            set["p_v"] = [&](const E& e) { cfg.src.p_v = parse_f64(e, where); };
            set["p_x"] = [&](const E& e) { cfg.src.p_x = parse_f64(e, where); };
            set["p_y"] = [&](const E& e) { cfg.src.p_y = parse_f64(e, where); };
            consume_section(sec, where, set);
        } else if (sec.name == "link") {
            std::map<std::string, std::function<void(const E&)>> set;
            set["length_ac_km"] = [&](const E& e) {
                cfg.link.length_ac_km = parse_f64(e, where);
            };
            set["length_bc_km"] = [&](const E& e) {
                cfg.link.length_bc_km = parse_f64(e, where);
            };
            set["atten_ac_db"] = [&](const E& e) {
                cfg.link.atten_ac_db = parse_f64(e, where);
            };
            set["atten_bc_db"] = [&](const E& e) {
                cfg.link.atten_bc_db = parse_f64(e, where);
            };
            set["det_eff_1"] = [&](const E& e) {
                cfg.link.det_eff_1 = parse_f64(e, where);
            };
            set["det_eff_2"] = [&](const E& e) {
                cfg.link.det_eff_2 = parse_f64(e, where);
            };
            set["dark_rate_1"] = [&](const E& e) {
                cfg.link.dark_rate_1 = parse_f64(e, where);
            };
            set["dark_rate_2"] = [&](const E& e) {
                cfg.link.dark_rate_2 = parse_f64(e, where);
            };
            set["window_eff"] = [&](const E& e) {
                cfg.link.window_eff = parse_f64(e, where);
            };
            set["eff_freq_hz"] = [&](const E& e) {
                cfg.link.eff_freq_hz = parse_f64(e, where);
            };
            set["misalign"] = [&](const E& e) {
                cfg.link.misalign = parse_f64(e, where);
            };
            consume_section(sec, where, set);
        } else if (sec.name == "sim") {
            std::map<std::string, std::function<void(const E&)>> set;
            set["n_total"] = [&](const E& e) { cfg.n_total = parse_i64(e, where); };
            set["seed"] = [&](const E& e) {
                std::uint64_t v = 0;
                auto [ptr, ec] =
                    std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
                if (ec != std::errc{} || ptr != e.value.data() + e.value.size())
                    throw ParseError(where, e.line, "expected unsigned integer for 'seed'");
                cfg.seed = v;
            };
            set["phase_noise_sigma_deg"] = [&](const E& e) {
                cfg.phase_noise_sigma_deg = parse_f64(e, where);
            };
            set["ds_deg"] = [&](const E& e) { cfg.ds_deg = parse_f64(e, where); };
            consume_section(sec, where, set);
        } else {
            throw ParseError(where, sec.line, "unknown section [" + sec.name + "]");
        }
    }
    cfg.validate();
    return cfg;
}

SimConfig load_sim_config(const std::string& path) {
    return parse_sim_config(read_file(path), path);
}

void DriftConfig::validate() const {
    if (n_windows <= 0) throw std::invalid_argument("DriftConfig: n_windows must be positive");
    if (noise_sigma_deg < 0.0) throw std::invalid_argument("DriftConfig: negative noise sigma");
    if (ref_counts_per_window < 0.0 || dim_rate_hz < 0.0)
        throw std::invalid_argument("DriftConfig: negative rate");
    if (lambda1_nm <= 0.0 || lambda2_nm <= 0.0)
        throw std::invalid_argument("DriftConfig: wavelengths must be positive");
}

DriftConfig parse_drift_config(const std::string& text, const std::string& where) {
    const IniDoc doc = parse_ini(text, where);
    DriftConfig cfg;
    using E = IniDoc::Entry;
    for (const auto& sec : doc.sections) {
        if (sec.name != "drift")
            throw ParseError(where, sec.line, "unknown section [" + sec.name + "]");
        std::map<std::string, std::function<void(const E&)>> set;
        set["drift_deg_per_window"] = [&](const E& e) {
            cfg.drift_deg_per_window = parse_f64(e, where);
        };
        set["n_windows"] = [&](const E& e) {
            cfg.n_windows = static_cast<int>(parse_i64(e, where));
        };
        set["noise_sigma_deg"] = [&](const E& e) {
            cfg.noise_sigma_deg = parse_f64(e, where);
        };
        set["ref_counts_per_window"] = [&](const E& e) {
            cfg.ref_counts_per_window = parse_f64(e, where);
        };
        set["dim_rate_hz"] = [&](const E& e) { cfg.dim_rate_hz = parse_f64(e, where); };
        set["lambda1_nm"] = [&](const E& e) { cfg.lambda1_nm = parse_f64(e, where); };
        set["lambda2_nm"] = [&](const E& e) { cfg.lambda2_nm = parse_f64(e, where); };
        set["offset_deg"] = [&](const E& e) { cfg.offset_deg = parse_f64(e, where); };
        set["seed"] = [&](const E& e) {
            cfg.seed = static_cast<std::uint64_t>(parse_i64(e, where));
        };
        consume_section(sec, where, set);
    }
    cfg.validate();
    return cfg;
}

DriftConfig load_drift_config(const std::string& path) {
    return parse_drift_config(read_file(path), path);
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i)
        out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        if (row.size() != header.size())
            throw std::invalid_argument("to_csv: row width mismatch");
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << row[i];
        out << "\n";
    }
    return out.str();
}

std::string serialize_report(const KeyRateReport& rep, const std::string& input_digest) {
    std::ostringstream out;
    out << "[report]\n";
    out << "mode = " << (rep.mode == RateMode::Asymptotic ? "asymptotic" : "finite")
        << "\n";
    out << "input_digest = " << input_digest << "\n";
    out << "positive = " << (rep.positive ? "true" : "false") << "\n";
    out << "collapsed = " << (rep.collapsed ? "true" : "false") << "\n";
    out << "r_per_pulse = " << format_full(rep.r_per_pulse) << "\n";
    out << "r_bps = " << format_full(rep.r_bps) << "\n";
    out << "gamma_prime = " << format_full(rep.gamma_prime) << "\n";
    out << "plob_bits = " << format_full(rep.plob_bits) << "\n";
    out << "\n[counting_rates]\n";
    static const char* names = "vxy";
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            out << "s_" << names[a] << names[b] << " = "
                << format_full(rep.counting_rate[a][b]) << "\n";
    out << "\n[decoy]\n";
    out << "s01_lb = " << format_full(rep.decoy.s01_lb) << "\n";
    out << "s10_lb = " << format_full(rep.decoy.s10_lb) << "\n";
    out << "s1_lb = " << format_full(rep.decoy.s1_lb) << "\n";
    out << "n01_lb = " << format_full(rep.decoy.n01_lb) << "\n";
    out << "n10_lb = " << format_full(rep.decoy.n10_lb) << "\n";
    out << "n1_lb = " << format_full(rep.decoy.n01_lb + rep.decoy.n10_lb) << "\n";
    out << "e1ph_ub = " << format_full(rep.decoy.e1ph_ub) << "\n";
    out << "t_x = " << format_full(rep.decoy.t_x) << "\n";
    out << "n_x = " << format_full(rep.decoy.n_x) << "\n";
    out << "m_x = " << format_full(rep.decoy.m_x) << "\n";
    out << "\n[aopp]\n";
    out << "n_t = " << format_full(rep.n_t) << "\n";
    out << "e_before = " << format_full(rep.e_before) << "\n";
    out << "n_g = " << format_full(rep.n_g) << "\n";
    out << "n_t_after = " << format_full(rep.n_t_after) << "\n";
    out << "e_t_after = " << format_full(rep.e_t_after) << "\n";
    out << "n1_after = " << format_full(rep.aopp.n1_after) << "\n";
    out << "e1ph_after = " << format_full(rep.aopp.e1ph_after) << "\n";
    return out.str();
}

} // namespace snstf

#pragma once

// Substitution spec files, report serialization and the command dispatcher
// behind the `subac` executable.
//
// Spec format (UTF-8, LF):
//
//     # comment
//     a -> aac        compact form: single-character letters, unspaced image
//     b -> a c c      spaced form: whitespace-delimited letter tokens
//
// All images must have the same length.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "subac/core.hpp"
#include "subac/discrepancy.hpp"
#include "subac/empirical.hpp"
#include "subac/errors.hpp"
#include "subac/invariants.hpp"
#include "subac/structure.hpp"

namespace subac {

inline constexpr const char* tool_version = "0.1.0";

struct SpecDocument {
    std::string source_name;
    Substitution substitution;
    std::vector<std::string> comments;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_whitespace(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string token; in >> token;) out.push_back(token);
    return out;
}

// 64-bit FNV-1a, hex encoded.
inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

} // namespace detail

inline SpecDocument parse_spec(const std::string& text, const std::string& source_name = "<input>") {
    struct RawRule {
        std::string letter;
        std::string image;
        std::size_t line;
    };
    SpecDocument doc;
    doc.source_name = source_name;
    std::vector<RawRule> raw;

    std::istringstream in(text);
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            doc.comments.push_back(detail::trim(line.substr(hash + 1)));
            line.erase(hash);
        }
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto arrow = line.find("->");
        if (arrow == std::string::npos || line.find("->", arrow + 2) != std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": expected 'LETTER -> IMAGE'");
        const std::string letter = detail::trim(line.substr(0, arrow));
        const std::string image = detail::trim(line.substr(arrow + 2));
        if (letter.empty() || detail::split_whitespace(letter).size() != 1)
            throw ParseError("line " + std::to_string(line_no) + ": left side must be a single letter token");
        if (image.empty()) throw ParseError("line " + std::to_string(line_no) + ": empty image");
        raw.push_back({letter, image, line_no});
    }
    if (raw.empty()) throw ParseError("no rules found");

    std::vector<std::string> tokens;
    for (const auto& r : raw) {
        if (std::find(tokens.begin(), tokens.end(), r.letter) != tokens.end())
            throw ParseError("line " + std::to_string(r.line) + ": duplicate rule for '" + r.letter + "'");
        tokens.push_back(r.letter);
    }
    Alphabet alphabet(tokens);
    const bool single_chars = alphabet.compact();

    std::vector<Word> rules;
    for (const auto& r : raw) {
        const auto parts = detail::split_whitespace(r.image);
        std::vector<std::string> symbols;
        if (parts.size() == 1 && !alphabet.find(parts[0]) && single_chars) {
            for (char ch : parts[0]) symbols.emplace_back(1, ch);
        } else {
            symbols = parts;
        }
        Word w;
        for (const auto& sym : symbols) {
            const auto a = alphabet.find(sym);
            if (!a) throw ParseError("line " + std::to_string(r.line) + ": undeclared letter '" + sym + "'");
            w.push_back(*a);
        }
        rules.push_back(std::move(w));
    }
    for (const auto& w : rules)
        if (w.size() != rules.front().size()) throw PreconditionError("non-constant length");
    doc.substitution = Substitution(std::move(alphabet), std::move(rules));
    return doc;
}

inline std::string render_rule(const Substitution& s, Letter a) {
    return s.alphabet().token(a) + " -> " + s.alphabet().render(s.rule(a));
}

inline std::string render_spec(const SpecDocument& doc) {
    std::string out;
    for (const auto& c : doc.comments) out += c.empty() ? "#\n" : "# " + c + "\n";
    for (Letter a = 0; a < doc.substitution.size(); ++a) out += render_rule(doc.substitution, a) + "\n";
    return out;
}

inline SpecDocument read_spec_file(const std::string& path, std::string* raw_text = nullptr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (raw_text) *raw_text = buffer.str();
    return parse_spec(buffer.str(), path);
}

// ---------------------------------------------------------------------------
// Reports

namespace detail {

inline nlohmann::json big_to_json(const BigInt& v) {
    if (v <= BigInt(std::numeric_limits<std::uint64_t>::max())) return v.convert_to<std::uint64_t>();
    return v.str();
}

inline nlohmann::json real_to_json(double v) {
    if (std::isinf(v)) return "infinity";
    return v;
}

inline std::string format_real(double v, int precision = 10) {
    if (std::isinf(v)) return "infinity";
    std::ostringstream out;
    out << std::setprecision(precision) << v;
    return out.str();
}

} // namespace detail

inline nlohmann::json report_json(const AnalysisReport& r, const std::vector<BigInt>& d_m) {
    using nlohmann::json;
    const Alphabet& base_alphabet = r.pure_base.alphabet();
    json j;
    j["alphabet"] = r.alphabet.tokens();
    j["length_k"] = r.length_k;
    j["primitive"] = r.primitive;
    j["height"] = r.height;

    json base_rules = json::array();
    for (Letter a = 0; a < r.pure_base.size(); ++a) base_rules.push_back(render_rule(r.pure_base, a));
    j["pure_base"] = {{"alphabet", base_alphabet.tokens()}, {"rules", base_rules}};

    json disc_rules = json::array(), erasing = json::array(), growth = json::array();
    for (std::size_t p = 0; p < r.discrepancy.size(); ++p) {
        const std::string name = render_pair(base_alphabet, r.discrepancy.pairs()[p]);
        disc_rules.push_back(name + " -> " + render_pair_word(base_alphabet, r.discrepancy, r.discrepancy.rule(p)));
        if (r.discrepancy.erasing()[p]) erasing.push_back(name);
        growth.push_back({{"pair", name}, {"rate", r.pair_growth[p].rate}, {"degree", r.pair_growth[p].degree}});
    }
    j["discrepancy"] = {{"rules", disc_rules}, {"erasing", erasing}, {"pair_growth", growth}};

    j["lambda_s"] = r.lambda_s;
    j["lambda_s_polynomial"] = polynomial_text(r.lambda_polynomial);
    j["lambda_s_integer"] = r.lambda_integer ? json(*r.lambda_integer) : json(nullptr);
    j["d_s"] = r.d_s;
    j["ac"] = detail::real_to_json(r.ac);
    j["finite_system"] = r.finite_system;
    j["discrete_spectrum"] = r.discrete_spectrum;
    j["null_and_tame"] = r.null_and_tame;
    j["graph_condition"] = r.graph_condition;
    j["mef"] = r.mef;
    json pairs = json::array();
    for (const auto& p : r.maximal_pairs.pairs) pairs.push_back(render_pair(base_alphabet, p));
    j["maximal_pairs"] = pairs;
    if (r.unpurified_rate) j["unpurified_lambda"] = *r.unpurified_rate;
    json dm = json::array();
    for (const auto& d : d_m) dm.push_back(detail::big_to_json(d));
    j["d_m"] = dm;
    return j;
}

// Adds provenance fields. `report_hash` covers everything except the timing.
inline void stamp(nlohmann::json& j, const std::string& source, const std::string& raw_input, double elapsed_ms) {
    j["tool"] = "subac";
    j["tool_version"] = tool_version;
    j["source"] = source;
    j["input_hash"] = detail::fnv1a_hex(raw_input);
    j["report_hash"] = detail::fnv1a_hex(j.dump());
    j["elapsed_ms"] = elapsed_ms;
}

inline void write_text_report(std::ostream& out, const AnalysisReport& r, const std::vector<BigInt>& d_m) {
    const Alphabet& base_alphabet = r.pure_base.alphabet();
    out << "alphabet: ";
    for (std::size_t i = 0; i < r.alphabet.size(); ++i) out << (i ? " " : "") << r.alphabet.token(static_cast<Letter>(i));
    out << "\nlength k: " << r.length_k << "\nprimitive: " << (r.primitive ? "yes" : "no") << "\nheight: " << r.height
        << "\n";
    if (r.height > 1) {
        out << "pure base:\n";
        for (Letter a = 0; a < r.pure_base.size(); ++a) out << "  " << render_rule(r.pure_base, a) << "\n";
    }
    out << "discrepancy substitution:\n";
    for (std::size_t p = 0; p < r.discrepancy.size(); ++p) {
        const auto& g = r.pair_growth[p];
        out << "  " << render_pair(base_alphabet, r.discrepancy.pairs()[p]) << " -> "
            << render_pair_word(base_alphabet, r.discrepancy, r.discrepancy.rule(p)) << "   growth ("
            << detail::format_real(g.rate) << ", " << g.degree << ")\n";
    }
    out << "lambda_s = " << detail::format_real(r.lambda_s) << " (root of " << polynomial_text(r.lambda_polynomial)
        << ")\n";
    out << "d_s = " << r.d_s << "\n";
    out << "ac = " << detail::format_real(r.ac, 7) << "\n";
    out << "finite system: " << (r.finite_system ? "yes" : "no") << "\n";
    out << "discrete spectrum: " << (r.discrete_spectrum ? "yes" : "no") << "\n";
    out << "null and tame: " << (r.null_and_tame ? "yes" : "no") << "\n";
    out << "graph condition: " << (r.graph_condition ? "yes" : "no") << "\n";
    out << "MEF: " << r.mef << "\n";
    out << "maximal pairs:";
    for (const auto& p : r.maximal_pairs.pairs) out << " " << render_pair(base_alphabet, p);
    out << "\n";
    if (r.unpurified_rate)
        out << "unpurified discrepancy eigenvalue = " << detail::format_real(*r.unpurified_rate) << "\n";
    out << "d_m (m = 0.." << (d_m.empty() ? 0 : d_m.size() - 1) << "):";
    for (const auto& d : d_m) out << " " << d;
    out << "\n";
}

// ---------------------------------------------------------------------------
// Kernel listing

inline std::string kernel_element_name(const KernelDescriptor& kernel, std::size_t e, const Alphabet& alphabet) {
    if (e == 0) return "x";
    const auto& m = kernel.monoid[e];
    if (kernel.constant[e]) return alphabet.token(m.image.front()) + "^ω";
    std::string digits;
    for (std::size_t d : kernel.words[e]) digits += (digits.empty() ? "" : ".") + std::to_string(d);
    return "phi[" + digits + "](x)";
}

inline std::string render_map(const ColumnMap& m, const Alphabet& alphabet) {
    std::string out;
    for (Letter a = 0; a < m.image.size(); ++a)
        out += (a ? " " : "") + alphabet.token(a) + "→" + alphabet.token(m.image[a]);
    return out;
}

// ---------------------------------------------------------------------------
// Command dispatch

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"subac: amorphic complexity and tameness of automatic substitution systems", "subac"};
    app.require_subcommand(1);

    std::string file;
    bool as_json = false, as_text = false;
    std::size_t m_max = 10;
    auto* analyze = app.add_subcommand("analyze", "exact analysis report");
    analyze->add_option("FILE", file, "substitution spec")->required();
    auto* json_flag = analyze->add_flag("--json", as_json, "JSON report");
    analyze->add_flag("--text", as_text, "text report (default)")->excludes(json_flag);
    analyze->add_option("--m-max", m_max, "largest m in the d_m table")->check(CLI::Range(0, 64));

    std::size_t points = 256, window = 8192;
    double nu_min = 0.004, nu_max = 0.25;
    std::uint64_t seed = default_seed;
    std::string csv_path, density_csv_path;
    bool verify_json = false;
    auto* verify = app.add_subcommand("verify", "empirical separation profile against the exact formula");
    verify->add_option("FILE", file, "substitution spec")->required();
    verify->add_option("--points", points, "number of orbit points M");
    verify->add_option("--window", window, "window length N");
    verify->add_option("--nu-min", nu_min, "smallest nu of the grid");
    verify->add_option("--nu-max", nu_max, "largest nu of the grid");
    verify->add_option("--seed", seed, "seed for pair sampling (default fixed)");
    verify->add_option("--csv", csv_path, "write (nu, count) rows to this file");
    verify->add_option("--density-csv", density_csv_path, "write sampled (i, j, d1, ds) rows to this file");
    verify->add_flag("--json", verify_json, "JSON output");

    std::size_t syn_k = 0, syn_n = 0, syn_l = 0;
    std::string output_path;
    auto* synthesize = app.add_subcommand("synthesize", "write a substitution with ac = n log k / (n log k - log l)");
    synthesize->add_option("--k", syn_k, "base length")->required();
    synthesize->add_option("--n", syn_n, "exponent")->required();
    synthesize->add_option("--l", syn_l, "number of bijective columns")->required();
    synthesize->add_option("-o,--output", output_path, "output file (default stdout)");

    bool kernel_json = false;
    auto* kernel = app.add_subcommand("kernel", "column-map monoid and k-kernel listing");
    kernel->add_option("FILE", file, "substitution spec")->required();
    kernel->add_flag("--json", kernel_json, "JSON output");

    std::size_t t = 2, oracle_window = 16;
    auto* oracle = app.add_subcommand("oracle", "search a fixed-point prefix for a nullness witness");
    oracle->add_option("FILE", file, "substitution spec")->required();
    oracle->add_option("--t", t, "size of the position set G")->required();
    oracle->add_option("--window", oracle_window, "G lies in [0, window)")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "subac: " << e.what() << "\n";
        return static_cast<int>(ExitCode::parse);
    }

    try {
        const auto started = std::chrono::steady_clock::now();
        auto elapsed_ms = [&] {
            return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
        };

        if (analyze->parsed()) {
            std::string raw;
            const auto doc = read_spec_file(file, &raw);
            const auto report = classify(doc.substitution);
            const auto d_m = nonconstant_ap_counts(report.pure_base, m_max);
            if (as_json) {
                auto j = report_json(report, d_m);
                stamp(j, file, raw, elapsed_ms());
                out << j.dump(2) << "\n";
            } else {
                write_text_report(out, report, d_m);
            }
            return 0;
        }

        if (verify->parsed()) {
            std::string raw;
            const auto doc = read_spec_file(file, &raw);
            const auto report = classify(doc.substitution);
            auto profile = separation_profile(doc.substitution, points, window, nu_grid(nu_max, nu_min));
            const double slope = fit_slope(profile);
            const double deviation = std::isinf(report.ac) || report.ac == 0.0
                                         ? std::numeric_limits<double>::quiet_NaN()
                                         : (slope - report.ac) / report.ac;
            std::optional<LipschitzProbe> probe;
            if (!report.finite_system && report.discrete_spectrum)
                probe = lipschitz_ratio_probe(doc.substitution, 64, window, seed);
            if (!csv_path.empty()) {
                std::ofstream csv(csv_path, std::ios::binary);
                write_profile_csv(csv, profile);
            }
            if (!density_csv_path.empty() && probe) {
                std::ofstream csv(density_csv_path, std::ios::binary);
                write_density_csv(csv, probe->rows);
            }
            if (verify_json) {
                nlohmann::json j;
                j["points"] = points;
                j["window"] = window;
                j["seed"] = seed;
                j["nu_grid"] = profile.nu_grid;
                j["counts"] = profile.counts;
                j["slope"] = slope;
                j["fit_nu_high"] = profile.fit_nu_high;
                j["fit_nu_low"] = profile.fit_nu_low;
                j["ac_exact"] = detail::real_to_json(report.ac);
                j["relative_deviation"] = std::isnan(deviation) ? nlohmann::json(nullptr) : nlohmann::json(deviation);
                j["within_25_percent"] = !std::isnan(deviation) && std::abs(deviation) <= 0.25;
                if (probe) {
                    j["lipschitz_min_ratio"] = probe->min_ratio;
                    j["lipschitz_pairs"] = probe->pairs_used;
                    j["lipschitz_monotonicity_violations"] = probe->monotonicity_violations;
                }
                stamp(j, file, raw, elapsed_ms());
                out << j.dump(2) << "\n";
            } else {
                out << "points M = " << points << ", window N = " << window << ", seed = " << seed << "\n";
                out << "nu,count\n";
                for (std::size_t i = 0; i < profile.nu_grid.size(); ++i)
                    out << detail::format_real(profile.nu_grid[i], 6) << "," << profile.counts[i] << "\n";
                out << "fitted slope = " << detail::format_real(slope, 6) << " over nu in ["
                    << detail::format_real(profile.fit_nu_low, 6) << ", " << detail::format_real(profile.fit_nu_high, 6)
                    << "]\n";
                out << "exact ac = " << detail::format_real(report.ac, 7) << "\n";
                if (!std::isnan(deviation))
                    out << "relative deviation = " << detail::format_real(deviation, 4)
                        << (std::abs(deviation) <= 0.25 ? " (within 25%)" : " (outside 25%)") << "\n";
                if (probe)
                    out << "D_S/D_1 minimum ratio = " << detail::format_real(probe->min_ratio, 6) << " over "
                        << probe->pairs_used << " pairs, monotonicity violations = "
                        << probe->monotonicity_violations << "\n";
            }
            return 0;
        }

        if (synthesize->parsed()) {
            const auto subst = synthesize_target_ac(syn_k, syn_n, syn_l);
            const double K = std::pow(static_cast<double>(syn_k), static_cast<double>(syn_n));
            const double target = std::log(K) / (std::log(K) - std::log(static_cast<double>(syn_l)));
            SpecDocument doc;
            doc.substitution = subst;
            doc.comments.push_back("synthesized: k=" + std::to_string(syn_k) + " n=" + std::to_string(syn_n) +
                                   " l=" + std::to_string(syn_l) + " ac=" + detail::format_real(target, 7));
            const std::string text = render_spec(doc);
            if (output_path.empty()) {
                out << text;
            } else {
                std::ofstream file_out(output_path, std::ios::binary);
                if (!file_out) throw ResourceError("cannot write '" + output_path + "'");
                file_out << text;
            }
            return 0;
        }

        if (kernel->parsed()) {
            const auto doc = read_spec_file(file);
            require_analyzable(doc.substitution);
            const auto base = pure_base(doc.substitution);
            const auto& subst = base.pure_base;
            const auto descriptor = kernel_monoid(subst);
            const Word x = fixed_point_prefix(subst, 24);
            nlohmann::json elements = nlohmann::json::array();
            for (std::size_t e = 0; e < descriptor.size(); ++e) {
                Word y;
                for (Letter a : x) y.push_back(descriptor.monoid[e](a));
                nlohmann::json element;
                element["name"] = kernel_element_name(descriptor, e, subst.alphabet());
                element["map"] = render_map(descriptor.monoid[e], subst.alphabet());
                element["word"] = descriptor.words[e];
                element["constant"] = static_cast<bool>(descriptor.constant[e]);
                element["prefix"] = subst.alphabet().render(y);
                elements.push_back(element);
            }
            if (kernel_json) {
                nlohmann::json j;
                j["height"] = base.height;
                j["monoid_size"] = descriptor.size();
                j["elements"] = elements;
                out << j.dump(2) << "\n";
            } else {
                out << "height: " << base.height << "\nmonoid size: " << descriptor.size() << "\n";
                for (const auto& el : elements)
                    out << "  " << el["name"].get<std::string>() << "   map " << el["map"].get<std::string>()
                        << (el["constant"].get<bool>() ? "   constant" : "") << "   " << el["prefix"].get<std::string>()
                        << "...\n";
            }
            return 0;
        }

        if (oracle->parsed()) {
            const auto doc = read_spec_file(file);
            require_analyzable(doc.substitution);
            const Word prefix = fixed_point_prefix(doc.substitution, std::max<std::size_t>(4 * oracle_window, 4096));
            const auto witness = null_witness_search(prefix, t, oracle_window);
            const Alphabet& alphabet = doc.substitution.alphabet();
            if (witness) {
                out << "witness: G = {";
                for (std::size_t i = 0; i < witness->positions.size(); ++i) out << (i ? "," : "") << witness->positions[i];
                out << "} letters " << alphabet.token(witness->a) << "," << alphabet.token(witness->b)
                    << " (prefix is not " << t << "-null)\n";
            } else {
                out << "none found within window " << oracle_window << " (evidence only)\n";
            }
            return 0;
        }
    } catch (const Error& e) {
        err << "subac: " << e.what() << "\n";
        return static_cast<int>(e.exit_code());
    } catch (const std::exception& e) {
        err << "subac: internal error: " << e.what() << "\n";
        return static_cast<int>(ExitCode::internal);
    }
    return 0;
}

} // namespace subac

// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "stylo/errors.hpp"
#include "stylo/preprocess.hpp"

namespace stylo {

namespace detail {
// Defined in the generated rules_data.cpp; verbatim copies of data/rules/*.rules.
std::string_view builtin_rules_text(Language lang);
} // namespace detail

namespace {

std::vector<std::string> split_ws(std::string_view line) {
    std::vector<std::string> tokens;
    std::istringstream in{std::string(line)};
    std::string tok;
    while (in >> tok) tokens.push_back(tok);
    return tokens;
}

char32_t parse_hex_cp(const std::string& tok, const std::string& origin, int line_no) {
    char32_t cp = 0;
    if (tok.empty() || tok.size() > 6) {
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": bad code point '" + tok + "'");
    }
    for (char c : tok) {
        int digit;
        if (c >= '0' && c <= '9') digit = c - '0';
        else if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
        else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
        else throw ConfigError(origin + ":" + std::to_string(line_no) + ": bad code point '" + tok + "'");
        cp = cp * 16 + static_cast<char32_t>(digit);
    }
    return cp;
}

bool parse_flag(const std::string& tok, const std::string& origin, int line_no) {
    if (tok == "on") return true;
    if (tok == "off") return false;
    throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected on/off, got '" + tok + "'");
}

} // namespace

CanonicalRules CanonicalRules::parse(std::string_view text, const std::string& origin) {
    CanonicalRules rules;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto tokens = split_ws(line);
        if (tokens.empty()) continue;

        const std::string& key = tokens[0];
        if (key == "language") {
            if (tokens.size() != 2) throw ConfigError(origin + ":" + std::to_string(line_no) + ": language takes one value");
            rules.language = language_from_string(tokens[1]);
        } else if (key == "latin_fold") {
            if (tokens.size() != 2) throw ConfigError(origin + ":" + std::to_string(line_no) + ": latin_fold takes one value");
            rules.latin_fold = parse_flag(tokens[1], origin, line_no);
        } else if (key == "digit_fold") {
            if (tokens.size() != 2) throw ConfigError(origin + ":" + std::to_string(line_no) + ": digit_fold takes one value");
            rules.digit_fold = parse_flag(tokens[1], origin, line_no);
        } else if (key == "map") {
            if (tokens.size() < 3 || tokens[2] != "->") {
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": expected 'map SRC -> DST...'");
            }
            const char32_t src = parse_hex_cp(tokens[1], origin, line_no);
            std::u32string dst;
            for (std::size_t i = 3; i < tokens.size(); ++i) {
                dst.push_back(parse_hex_cp(tokens[i], origin, line_no));
            }
            if (!rules.merge_table.emplace(src, std::move(dst)).second) {
                throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate map source");
            }
        } else {
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown directive '" + key + "'");
        }
    }
    // Targets must be fixpoints, otherwise canonicalize would not be idempotent.
    for (const auto& [src, dst] : rules.merge_table) {
        for (char32_t cp : dst) {
            if (rules.merge_table.count(cp) != 0) {
                throw ConfigError(origin + ": map target U+" + std::to_string(cp) + " is itself a map source");
            }
        }
    }
    return rules;
}

CanonicalRules CanonicalRules::load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ConfigError("cannot read rules file: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), file.string());
}

CanonicalRules CanonicalRules::builtin(Language lang) {
    return parse(detail::builtin_rules_text(lang), "builtin:" + to_string(lang));
}

std::string CanonicalRules::serialize() const {
    std::ostringstream out;
    out << "language " << to_string(language) << "\n";
    out << "latin_fold " << (latin_fold ? "on" : "off") << "\n";
    out << "digit_fold " << (digit_fold ? "on" : "off") << "\n";
    char buf[16];
    for (const auto& [src, dst] : merge_table) {
        std::snprintf(buf, sizeof buf, "%04X", static_cast<unsigned>(src));
        out << "map " << buf << " ->";
        for (char32_t cp : dst) {
            std::snprintf(buf, sizeof buf, "%04X", static_cast<unsigned>(cp));
            out << " " << buf;
        }
        out << "\n";
    }
    return out.str();
}

} // namespace stylo

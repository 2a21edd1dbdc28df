// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#include "stylo/preprocess.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/uscript.h>

#include "stylo/errors.hpp"
#include "stylo/utf8.hpp"

namespace stylo {

namespace {

const icu::Normalizer2& nfkd() {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* instance = icu::Normalizer2::getNFKDInstance(status);
    if (U_FAILURE(status) || instance == nullptr) {
        throw Error(std::string("ICU NFKD unavailable: ") + u_errorName(status));
    }
    return *instance;
}

bool is_latin_letter(char32_t cp) {
    UErrorCode status = U_ZERO_ERROR;
    const UScriptCode script = uscript_getScript(static_cast<UChar32>(cp), &status);
    return U_SUCCESS(status) && script == USCRIPT_LATIN && u_isalpha(static_cast<UChar32>(cp));
}

bool is_whitespace(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)); }

bool is_decimal_digit(char32_t cp) {
    return u_charType(static_cast<UChar32>(cp)) == U_DECIMAL_DIGIT_NUMBER;
}

} // namespace

Language language_from_string(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "dutch" || lower == "du" || lower == "nl") return Language::Dutch;
    if (lower == "english" || lower == "en") return Language::English;
    if (lower == "greek" || lower == "gr" || lower == "el") return Language::Greek;
    if (lower == "spanish" || lower == "sp" || lower == "es") return Language::Spanish;
    if (lower == "other") return Language::Other;
    throw ConfigError("unknown language: " + std::string(name));
}

std::string to_string(Language lang) {
    switch (lang) {
    case Language::Dutch: return "dutch";
    case Language::English: return "english";
    case Language::Greek: return "greek";
    case Language::Spanish: return "spanish";
    case Language::Other: return "other";
    }
    return "other";
}

std::u32string decompose(std::string_view utf8) {
    const std::u32string codepoints = decode_utf8(utf8);

    icu::UnicodeString raw;
    for (char32_t cp : codepoints) raw.append(static_cast<UChar32>(cp));

    UErrorCode status = U_ZERO_ERROR;
    const icu::UnicodeString normalized = nfkd().normalize(raw, status);
    if (U_FAILURE(status)) {
        throw InputError(std::string("NFKD normalization failed: ") + u_errorName(status));
    }

    std::u32string out;
    out.reserve(static_cast<std::size_t>(normalized.countChar32()));
    for (int32_t i = 0; i < normalized.length();) {
        const UChar32 cp = normalized.char32At(i);
        i += U16_LENGTH(cp);
        if (u_isupper(cp) || u_istitle(cp)) {
            const UChar32 lower = u_tolower(cp);
            if (lower != cp) {
                out.push_back(kUpperMarker);
                out.push_back(static_cast<char32_t>(lower));
                continue;
            }
        }
        out.push_back(static_cast<char32_t>(cp));
    }
    return out;
}

std::u32string canonicalize(std::u32string_view decomposed, const CanonicalRules& rules) {
    std::u32string mapped;
    mapped.reserve(decomposed.size());
    for (char32_t cp : decomposed) {
        const auto it = rules.merge_table.find(cp);
        if (it != rules.merge_table.end()) {
            mapped.append(it->second);
            continue;
        }
        if (rules.latin_fold && is_latin_letter(cp)) {
            mapped.push_back(U's');
            continue;
        }
        if (rules.digit_fold && is_decimal_digit(cp)) {
            mapped.push_back(kDigitFold);
            continue;
        }
        mapped.push_back(cp);
    }

    // Collapse whitespace runs to a single space; document edges carry none.
    std::u32string out;
    out.reserve(mapped.size());
    bool pending_space = false;
    for (char32_t cp : mapped) {
        if (is_whitespace(cp)) {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out.push_back(U' ');
        pending_space = false;
        out.push_back(cp);
    }
    return out;
}

Alphabet::Alphabet(std::vector<char32_t> symbols) : symbols_(std::move(symbols)) {
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        const auto [it, inserted] = index_.emplace(symbols_[i], static_cast<std::int32_t>(i));
        if (!inserted) throw CorpusError("duplicate symbol in alphabet");
    }
}

std::optional<std::int32_t> Alphabet::index_of(char32_t cp) const {
    const auto it = index_.find(cp);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::string Alphabet::serialize() const {
    std::string out;
    char buf[16];
    for (char32_t cp : symbols_) {
        std::snprintf(buf, sizeof buf, "%04X\n", static_cast<unsigned>(cp));
        out += buf;
    }
    return out;
}

Alphabet Alphabet::deserialize(std::string_view text) {
    std::vector<char32_t> symbols;
    std::size_t pos = 0;
    int line_no = 1;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) {
            ++line_no;
            continue;
        }
        char32_t cp = 0;
        for (char c : line) {
            int digit;
            if (c >= '0' && c <= '9') digit = c - '0';
            else if (c >= 'A' && c <= 'F') digit = c - 'A' + 10;
            else if (c >= 'a' && c <= 'f') digit = c - 'a' + 10;
            else throw InputError("alphabet file: bad hex on line " + std::to_string(line_no));
            cp = cp * 16 + static_cast<char32_t>(digit);
        }
        if (cp > 0x10FFFF) throw InputError("alphabet file: code point out of range on line " + std::to_string(line_no));
        symbols.push_back(cp);
        ++line_no;
    }
    return Alphabet(std::move(symbols));
}

void Alphabet::save(const std::filesystem::path& file) const {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw InputError("cannot write alphabet file: " + file.string());
    out << serialize();
}

Alphabet Alphabet::load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw InputError("cannot read alphabet file: " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize(buf.str());
}

std::uint64_t Alphabet::hash() const {
    // FNV-1a over the serialized text.
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : serialize()) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

Alphabet build_alphabet(std::span<const std::u32string> corpus, double threshold) {
    std::map<char32_t, std::uint64_t> counts;
    std::uint64_t total = 0;
    for (const std::u32string& text : corpus) {
        for (char32_t cp : text) {
            ++counts[cp];
            ++total;
        }
    }
    if (total == 0) throw CorpusError("cannot build alphabet from an empty corpus");

    std::vector<std::pair<char32_t, std::uint64_t>> kept;
    kept.reserve(counts.size());
    for (const auto& [cp, count] : counts) {
        const bool synthetic = (cp == kUpperMarker || cp == kDigitFold);
        const double freq = static_cast<double>(count) / static_cast<double>(total);
        if (synthetic || freq >= threshold) kept.emplace_back(cp, count);
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    std::vector<char32_t> symbols;
    symbols.reserve(kept.size());
    for (const auto& [cp, count] : kept) symbols.push_back(cp);
    return Alphabet(std::move(symbols));
}

SymbolSequence encode(std::u32string_view canonical, const Alphabet& alphabet,
                      std::string doc_id) {
    SymbolSequence seq;
    seq.doc_id = std::move(doc_id);
    seq.indices.reserve(canonical.size());
    int run = 0; // symbols of the current run already emitted
    std::int32_t last = -1;
    bool have_last = false;
    for (char32_t cp : canonical) {
        const auto idx = alphabet.index_of(cp);
        if (!idx) continue; // no unknown token
        if (have_last && *idx == last) {
            if (run >= kMaxRun) continue;
        } else {
            last = *idx;
            have_last = true;
            run = 0;
        }
        ++run;
        seq.indices.push_back(*idx);
    }
    return seq;
}

SymbolSequence preprocess_document(std::string_view utf8, const CanonicalRules& rules,
                                   const Alphabet& alphabet, std::string doc_id) {
    return encode(canonicalize(decompose(utf8), rules), alphabet, std::move(doc_id));
}

std::u32string decode(const SymbolSequence& seq, const Alphabet& alphabet) {
    std::u32string out;
    out.reserve(seq.indices.size());
    for (std::int32_t idx : seq.indices) out.push_back(alphabet.symbol(idx));
    return out;
}

} // namespace stylo

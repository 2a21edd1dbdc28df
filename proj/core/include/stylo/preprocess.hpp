// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#ifndef STYLO_PREPROCESS_HPP
#define STYLO_PREPROCESS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace stylo {

enum class Language { Dutch, English, Greek, Spanish, Other };

Language language_from_string(std::string_view name);
std::string to_string(Language lang);

// Capital letters decompose into this marker followed by the lowercase form.
// U+00B9 (superscript one) cannot collide with real text: NFKD rewrites any
// literal superscript one to the digit 1 before markers are inserted.
inline constexpr char32_t kUpperMarker = U'¹';

// The synthetic symbol every decimal digit folds to.
inline constexpr char32_t kDigitFold = U'7';

// Runs of identical symbols are truncated at this length.
inline constexpr int kMaxRun = 5;

/// Per-language character mapping: equivalence merges plus fold flags.
/// Loadable from the rule files under data/rules/; identical copies are
/// compiled into the library as defaults.
struct CanonicalRules {
    Language language = Language::Other;
    std::map<char32_t, std::u32string> merge_table; // empty target deletes
    bool latin_fold = false;                        // Latin letters -> 's' (Greek)
    bool digit_fold = true;                         // decimal digits -> '7'

    static CanonicalRules builtin(Language lang);
    static CanonicalRules load(const std::filesystem::path& file);
    static CanonicalRules parse(std::string_view text, const std::string& origin = "<string>");
    std::string serialize() const;
};

/// NFKD normalization followed by uppercase-marker splitting.
/// Throws InputError naming the byte offset on malformed UTF-8.
std::u32string decompose(std::string_view utf8);

/// Merge-table substitution, optional Latin/digit folding, whitespace
/// collapsing. Input must already be decomposed. Idempotent.
std::u32string canonicalize(std::u32string_view decomposed, const CanonicalRules& rules);

/// Ordered symbol table mapping canonical code points to dense indices.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::vector<char32_t> symbols);

    int size() const { return static_cast<int>(symbols_.size()); }
    char32_t symbol(int index) const { return symbols_.at(static_cast<std::size_t>(index)); }
    const std::vector<char32_t>& symbols() const { return symbols_; }
    std::optional<std::int32_t> index_of(char32_t cp) const;

    /// One symbol per line as uppercase hex code points, order significant.
    std::string serialize() const;
    static Alphabet deserialize(std::string_view text);
    void save(const std::filesystem::path& file) const;
    static Alphabet load(const std::filesystem::path& file);

    /// FNV-1a over the serialized form; stored in model files so loaders can
    /// reject models paired with the wrong alphabet.
    std::uint64_t hash() const;

    bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

private:
    std::vector<char32_t> symbols_;
    std::map<char32_t, std::int32_t> index_;
};

/// Induce the alphabet of every character whose frequency in the pooled
/// canonical corpus is >= threshold, ordered by descending frequency with
/// code-point ties ascending. The uppercase marker and the digit-fold symbol
/// are exempt from discarding. Throws CorpusError on an empty corpus.
Alphabet build_alphabet(std::span<const std::u32string> corpus, double threshold = 1e-4);

struct SymbolSequence {
    std::string doc_id;
    std::vector<std::int32_t> indices;

    std::size_t size() const { return indices.size(); }
};

/// Drop characters absent from the alphabet, then truncate runs longer than
/// kMaxRun. Every output index is < alphabet.size().
SymbolSequence encode(std::u32string_view canonical, const Alphabet& alphabet,
                      std::string doc_id = {});

/// decompose -> canonicalize -> encode.
SymbolSequence preprocess_document(std::string_view utf8, const CanonicalRules& rules,
                                   const Alphabet& alphabet, std::string doc_id = {});

/// Map indices back to canonical code points (debug dumps, tests).
std::u32string decode(const SymbolSequence& seq, const Alphabet& alphabet);

} // namespace stylo

#endif

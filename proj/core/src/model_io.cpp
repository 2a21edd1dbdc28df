// Copyright 2026 The stylo authors
// SPDX-License-Identifier: Apache-2.0

#include "stylo/model_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "stylo/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "model files are little-endian; add byte swapping for this platform");
static_assert(sizeof(double) == 8);

namespace stylo {

namespace {

constexpr char kMagic[8] = {'S', 'T', 'Y', 'L', 'O', 'M', 'D', 'L'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_u64(std::ostream& out, std::uint64_t v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_doubles(std::ostream& out, const std::vector<double>& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
}

std::uint32_t read_u32(std::istream& in, const std::string& what) {
    std::uint32_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw InputError("model file truncated reading " + what);
    return v;
}

std::uint64_t read_u64(std::istream& in, const std::string& what) {
    std::uint64_t v = 0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw InputError("model file truncated reading " + what);
    return v;
}

void read_doubles(std::istream& in, std::vector<double>& v, const std::string& what) {
    if (!in.read(reinterpret_cast<char*>(v.data()),
                 static_cast<std::streamsize>(v.size() * sizeof(double)))) {
        throw InputError("model file truncated reading " + what);
    }
}

} // namespace

void save_model(const ModelParams& params, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw InputError("cannot write model file: " + file.string());

    out.write(kMagic, sizeof kMagic);
    write_u32(out, kVersion);
    write_u32(out, static_cast<std::uint32_t>(params.vocab));
    write_u32(out, static_cast<std::uint32_t>(params.hidden));
    write_u32(out, static_cast<std::uint32_t>(params.head_count()));
    const char flags[4] = {params.has_control ? char(1) : char(0),
                           params.trained_backward ? char(1) : char(0), 0, 0};
    out.write(flags, sizeof flags);
    write_u64(out, params.alphabet_hash);

    write_doubles(out, params.w_xh);
    write_doubles(out, params.w_hh);
    write_doubles(out, params.b_h);
    for (const OutputHead& head : params.heads) {
        write_doubles(out, head.w);
        write_doubles(out, head.b);
    }
    if (!out) throw InputError("short write to model file: " + file.string());
}

ModelParams load_model(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw InputError("cannot read model file: " + file.string());

    char magic[8] = {};
    if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
        throw InputError("not a stylo model file: " + file.string());
    }
    const std::uint32_t version = read_u32(in, "version");
    if (version != kVersion) {
        throw InputError("unsupported model format version " + std::to_string(version));
    }
    const std::uint32_t vocab = read_u32(in, "vocab size");
    const std::uint32_t hidden = read_u32(in, "hidden size");
    const std::uint32_t heads = read_u32(in, "head count");
    char flags[4] = {};
    if (!in.read(flags, sizeof flags)) throw InputError("model file truncated reading flags");
    const std::uint64_t alphabet_hash = read_u64(in, "alphabet hash");

    if (vocab == 0 || heads == 0) throw InputError("model file declares empty dimensions");
    if (vocab > (1u << 24) || hidden > (1u << 24) || heads > (1u << 20)) {
        throw InputError("model file declares implausible dimensions");
    }

    ModelParams params = ModelParams::zeros(static_cast<int>(vocab), static_cast<int>(hidden),
                                            static_cast<int>(heads), flags[0] != 0);
    params.trained_backward = flags[1] != 0;
    params.alphabet_hash = alphabet_hash;
    read_doubles(in, params.w_xh, "input weights");
    read_doubles(in, params.w_hh, "recurrent weights");
    read_doubles(in, params.b_h, "hidden bias");
    for (std::size_t n = 0; n < params.heads.size(); ++n) {
        read_doubles(in, params.heads[n].w, "head " + std::to_string(n) + " weights");
        read_doubles(in, params.heads[n].b, "head " + std::to_string(n) + " bias");
    }
    char extra = 0;
    if (in.read(&extra, 1)) throw InputError("trailing bytes in model file: " + file.string());
    return params;
}

ModelParams load_model(const std::filesystem::path& file, const Alphabet& alphabet) {
    ModelParams params = load_model(file);
    if (params.alphabet_hash != alphabet.hash()) {
        throw ConfigError("model/alphabet mismatch: model was trained with a different alphabet");
    }
    if (params.vocab != alphabet.size()) {
        throw ConfigError("model vocab size does not match alphabet size");
    }
    return params;
}

} // namespace stylo

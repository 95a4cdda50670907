#include "edi/ccdm.hpp"

#include <algorithm>
#include <cctype>

#include "edi/error.hpp"
#include "edi/rng.hpp"

namespace edi {

BigInt multinomial(const std::vector<std::size_t>& counts) {
    // Product of binomials C(m_1, c_1) C(m_1 + c_2, c_2) ...; every partial
    // quotient is an integer, so the running value stays exact.
    BigInt result = 1;
    std::size_t total = 0;
    for (std::size_t c : counts) {
        for (std::size_t j = 1; j <= c; ++j) {
            ++total;
            result *= total;
            result /= j;
        }
    }
    return result;
}

CcdmCodec::CcdmCodec(Composition comp) : comp_(std::move(comp)) {
    codebook_size_ = multinomial(comp_.counts());
    input_bits_ = static_cast<std::size_t>(boost::multiprecision::msb(codebook_size_));
}

namespace {

/// Level index of every entry of `cw`, validating the histogram.
std::vector<std::size_t> indices_of(const Composition& comp, const AmplitudeCodeword& cw) {
    if (cw.size() != comp.blocklength())
        throw InvalidInputError("codeword length " + std::to_string(cw.size()) + " != blocklength " +
                                std::to_string(comp.blocklength()));
    std::vector<std::size_t> idx(cw.size());
    std::vector<std::size_t> hist(comp.num_levels(), 0);
    const auto& levels = comp.levels();
    for (std::size_t t = 0; t < cw.size(); ++t) {
        auto it = std::lower_bound(levels.begin(), levels.end(), cw.levels[t]);
        if (it == levels.end() || *it != cw.levels[t])
            throw InvalidInputError("codeword contains level " + std::to_string(cw.levels[t]) +
                                    " outside of the composition");
        idx[t] = static_cast<std::size_t>(it - levels.begin());
        ++hist[idx[t]];
    }
    if (hist != comp.counts()) throw InvalidInputError("codeword histogram differs from the composition");
    return idx;
}

}  // namespace

AmplitudeCodeword CcdmCodec::rank_decode(const BigInt& index) const {
    if (index < 0 || index >= codebook_size_)
        throw RangeError("codeword index out of range [0, N_C)");
    std::vector<std::size_t> remaining = comp_.counts();
    const std::size_t n = comp_.blocklength();
    BigInt rest = index;
    BigInt block = codebook_size_;  // completions of the current prefix
    AmplitudeCodeword cw;
    cw.levels.reserve(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
        const std::size_t left = n - pos;
        for (std::size_t s = 0; s < remaining.size(); ++s) {
            if (remaining[s] == 0) continue;
            BigInt with_s = block * remaining[s] / left;
            if (rest < with_s) {
                cw.levels.push_back(comp_.levels()[s]);
                --remaining[s];
                block = std::move(with_s);
                break;
            }
            rest -= with_s;
        }
    }
    return cw;
}

BigInt CcdmCodec::rank_encode(const AmplitudeCodeword& cw) const {
    const auto idx = indices_of(comp_, cw);
    std::vector<std::size_t> remaining = comp_.counts();
    const std::size_t n = comp_.blocklength();
    BigInt rank = 0;
    BigInt block = codebook_size_;
    for (std::size_t pos = 0; pos < n; ++pos) {
        const std::size_t left = n - pos;
        for (std::size_t s = 0; s < idx[pos]; ++s)
            if (remaining[s] > 0) rank += block * remaining[s] / left;
        block = block * remaining[idx[pos]] / left;
        --remaining[idx[pos]];
    }
    return rank;
}

AmplitudeCodeword CcdmCodec::encode_bits(const std::vector<bool>& bits) const {
    if (bits.size() != input_bits_)
        throw InvalidInputError("expected " + std::to_string(input_bits_) + " input bits, got " +
                                std::to_string(bits.size()));
    BigInt index = 0;
    for (bool b : bits) {
        index <<= 1;
        if (b) index |= 1;
    }
    return rank_decode(index);
}

std::vector<bool> CcdmCodec::decode_bits(const AmplitudeCodeword& cw) const {
    BigInt rank = rank_encode(cw);
    if (rank >= (BigInt(1) << input_bits_)) throw RangeError("codeword is not in the 2^k codebook prefix");
    std::vector<bool> bits(input_bits_);
    for (std::size_t i = 0; i < input_bits_; ++i)
        bits[input_bits_ - 1 - i] = boost::multiprecision::bit_test(rank, static_cast<unsigned>(i));
    return bits;
}

std::vector<bool> bits_from_hex(std::string_view hex, std::size_t k) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    const std::size_t digits = (k + 3) / 4;
    if (hex.size() != digits)
        throw InvalidInputError("expected " + std::to_string(digits) + " hex digits for " + std::to_string(k) +
                                " bits, got " + std::to_string(hex.size()));
    std::vector<bool> all;
    all.reserve(4 * digits);
    for (char c : hex) {
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else throw InvalidInputError(std::string("invalid hex digit '") + c + "'");
        for (int b = 3; b >= 0; --b) all.push_back(((v >> b) & 1) != 0);
    }
    const std::size_t pad = all.size() - k;
    for (std::size_t i = 0; i < pad; ++i)
        if (all[i]) throw InvalidInputError("hex value does not fit in " + std::to_string(k) + " bits");
    return {all.begin() + static_cast<std::ptrdiff_t>(pad), all.end()};
}

std::string bits_to_hex(const std::vector<bool>& bits) {
    static constexpr char digits[] = "0123456789abcdef";
    const std::size_t pad = (4 - bits.size() % 4) % 4;
    std::string out;
    int acc = 0;
    std::size_t filled = pad;
    for (bool b : bits) {
        acc = (acc << 1) | (b ? 1 : 0);
        if (++filled == 4) {
            out.push_back(digits[acc]);
            acc = 0;
            filled = 0;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Samplers

namespace {

std::vector<int> sorted_multiset(const Composition& comp) {
    std::vector<int> base;
    base.reserve(comp.blocklength());
    for (std::size_t s = 0; s < comp.num_levels(); ++s) base.insert(base.end(), comp.counts()[s], comp.levels()[s]);
    return base;
}

void shuffle_block(int* first, std::size_t n, Rng& rng) {
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng.below(i);
        std::swap(first[i - 1], first[j]);
    }
}

}  // namespace

std::vector<int> sample_emulated_levels(const Composition& comp, std::uint64_t seed, std::size_t blocks) {
    if (blocks == 0) throw InvalidInputError("sample_emulated: blocks must be >= 1");
    const std::vector<int> base = sorted_multiset(comp);
    const std::size_t n = base.size();
    std::vector<int> out(n * blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        Rng rng(seed, b);
        int* block = out.data() + b * n;
        std::copy(base.begin(), base.end(), block);
        shuffle_block(block, n, rng);
    }
    return out;
}

std::vector<AmplitudeCodeword> sample_emulated(const Composition& comp, std::uint64_t seed, std::size_t blocks) {
    const std::vector<int> flat = sample_emulated_levels(comp, seed, blocks);
    const std::size_t n = comp.blocklength();
    std::vector<AmplitudeCodeword> out(blocks);
    for (std::size_t b = 0; b < blocks; ++b)
        out[b].levels.assign(flat.begin() + static_cast<std::ptrdiff_t>(b * n),
                             flat.begin() + static_cast<std::ptrdiff_t>((b + 1) * n));
    return out;
}

std::vector<int> sample_exact_levels(const CcdmCodec& codec, std::uint64_t seed, std::size_t blocks) {
    if (blocks == 0) throw InvalidInputError("sample_exact: blocks must be >= 1");
    const std::size_t k = codec.input_bits();
    const std::size_t n = codec.blocklength();
    std::vector<int> out;
    out.reserve(n * blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        Rng rng(seed, b);
        BigInt index = 0;
        for (std::size_t done = 0; done < k; done += 64) {
            const std::size_t take = std::min<std::size_t>(64, k - done);
            std::uint64_t word = rng.next();
            if (take < 64) word >>= (64 - take);
            index <<= take;
            index |= word;
        }
        const AmplitudeCodeword cw = codec.rank_decode(index);
        out.insert(out.end(), cw.levels.begin(), cw.levels.end());
    }
    return out;
}

}  // namespace edi

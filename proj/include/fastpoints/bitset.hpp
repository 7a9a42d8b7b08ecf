#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "fastpoints/errors.hpp"

namespace fastpoints {

// Fixed-length bit vector used for per-interval flags.  Word-packed so that
// intersection, counting, and subset tests run a word at a time; unused tail
// bits of the last word are kept zero as a class invariant.
class Bitset {
 public:
    Bitset() = default;
    explicit Bitset(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const { return size_; }

    bool test(std::size_t i) const {
        check_index(i);
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i, bool value = true) {
        check_index(i);
        const std::uint64_t mask = std::uint64_t{1} << (i & 63);
        if (value)
            words_[i >> 6] |= mask;
        else
            words_[i >> 6] &= ~mask;
    }

    std::size_t count() const {
        std::size_t n = 0;
        for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    bool none() const {
        for (std::uint64_t w : words_)
            if (w != 0) return false;
        return true;
    }

    bool all() const { return count() == size_; }

    bool operator==(const Bitset& other) const {
        return size_ == other.size_ && words_ == other.words_;
    }
    bool operator!=(const Bitset& other) const { return !(*this == other); }

    // True when every set bit of *this is also set in other.
    bool is_subset_of(const Bitset& other) const {
        check_same_size(other);
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] & ~other.words_[w]) return false;
        return true;
    }

    friend Bitset operator&(const Bitset& a, const Bitset& b) {
        a.check_same_size(b);
        Bitset out(a.size_);
        for (std::size_t w = 0; w < out.words_.size(); ++w)
            out.words_[w] = a.words_[w] & b.words_[w];
        return out;
    }

 private:
    void check_index(std::size_t i) const {
        if (i >= size_) throw usage_error("Bitset: index out of range");
    }
    void check_same_size(const Bitset& other) const {
        if (size_ != other.size_) throw usage_error("Bitset: size mismatch");
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace fastpoints

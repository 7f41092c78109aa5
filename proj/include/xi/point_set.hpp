#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "xi/lattice.hpp"

namespace xi {

/// Open-addressing set of 64-bit keys with O(1) clear.
///
/// Slots carry a generation stamp; a slot is live only if its stamp equals
/// the current generation, so clear() just bumps the generation. The table
/// doubles when the load factor passes 1/2.
class KeySet {
  public:
    explicit KeySet(std::size_t expected = 64) { rebuild(capacity_for(expected)); }

    void clear() noexcept {
        size_ = 0;
        if (++generation_ == 0) {
            for (auto& s : slots_) s.stamp = 0;
            generation_ = 1;
        }
    }

    [[nodiscard]] bool contains(std::uint64_t key) const noexcept {
        std::size_t i = slot_of(key);
        while (slots_[i].stamp == generation_) {
            if (slots_[i].key == key) return true;
            i = (i + 1) & mask_;
        }
        return false;
    }

    /// Returns true if the key was newly inserted.
    bool insert(std::uint64_t key) {
        if (2 * (size_ + 1) > slots_.size()) grow();
        std::size_t i = slot_of(key);
        while (slots_[i].stamp == generation_) {
            if (slots_[i].key == key) return false;
            i = (i + 1) & mask_;
        }
        slots_[i] = {key, generation_};
        ++size_;
        return true;
    }

    [[nodiscard]] std::size_t size() const noexcept { return size_; }

  private:
    struct Slot {
        std::uint64_t key = 0;
        std::uint32_t stamp = 0;
    };

    static std::size_t capacity_for(std::size_t expected) {
        std::size_t cap = 16;
        while (cap < 2 * expected) cap *= 2;
        return cap;
    }

    [[nodiscard]] std::size_t slot_of(std::uint64_t key) const noexcept {
        return static_cast<std::size_t>((key * 0x9E3779B97F4A7C15ull) >> shift_);
    }

    void rebuild(std::size_t cap) {
        slots_.assign(cap, Slot{});
        mask_ = cap - 1;
        shift_ = 64;
        for (std::size_t c = cap; c > 1; c >>= 1) --shift_;
        generation_ = 1;
        size_ = 0;
    }

    void grow() {
        std::vector<std::uint64_t> live;
        live.reserve(size_);
        for (const auto& s : slots_)
            if (s.stamp == generation_) live.push_back(s.key);
        rebuild(slots_.size() * 2);
        for (auto k : live) insert(k);
    }

    std::vector<Slot> slots_;
    std::size_t mask_ = 0;
    unsigned shift_ = 64;
    std::uint32_t generation_ = 1;
    std::size_t size_ = 0;
};

/// Set of lattice points (one hash cell per lattice point).
class PointSet {
  public:
    explicit PointSet(std::size_t expected = 64) : keys_(expected) {}
    void clear() noexcept { keys_.clear(); }
    [[nodiscard]] bool contains(LatticePoint p) const noexcept { return keys_.contains(p.packed()); }
    bool insert(LatticePoint p) { return keys_.insert(p.packed()); }
    [[nodiscard]] std::size_t size() const noexcept { return keys_.size(); }

  private:
    KeySet keys_;
};

/// Multimap from 64-bit keys to small integer payloads, with O(1) clear.
/// Values for a key are chained newest-first.
class KeyMultiMap {
  public:
    static constexpr std::uint32_t kEnd = 0xFFFFFFFFu;

    explicit KeyMultiMap(std::size_t expected = 64) : heads_(expected) {}

    void clear() noexcept {
        heads_.clear();
        values_.clear();
        next_.clear();
    }

    void insert(std::uint64_t key, std::uint32_t value) {
        const auto entry = static_cast<std::uint32_t>(values_.size());
        values_.push_back(value);
        next_.push_back(heads_.exchange(key, entry));
    }

    /// Index of the newest entry for `key`, or kEnd.
    [[nodiscard]] std::uint32_t first(std::uint64_t key) const noexcept { return heads_.find(key); }
    [[nodiscard]] std::uint32_t next(std::uint32_t entry) const noexcept { return next_[entry]; }
    [[nodiscard]] std::uint32_t value(std::uint32_t entry) const noexcept { return values_[entry]; }

    template <class Fn>
    void for_each(std::uint64_t key, Fn&& fn) const {
        for (auto e = first(key); e != kEnd; e = next_[e]) fn(values_[e]);
    }

  private:
    /// Key -> newest entry index.
    class HeadTable {
      public:
        explicit HeadTable(std::size_t expected) { rebuild(capacity_for(expected)); }

        void clear() noexcept {
            size_ = 0;
            if (++generation_ == 0) {
                for (auto& s : slots_) s.stamp = 0;
                generation_ = 1;
            }
        }

        [[nodiscard]] std::uint32_t find(std::uint64_t key) const noexcept {
            std::size_t i = slot_of(key);
            while (slots_[i].stamp == generation_) {
                if (slots_[i].key == key) return slots_[i].head;
                i = (i + 1) & mask_;
            }
            return kEnd;
        }

        /// Sets key's head to `head`, returning the previous head (or kEnd).
        std::uint32_t exchange(std::uint64_t key, std::uint32_t head) {
            if (2 * (size_ + 1) > slots_.size()) grow();
            std::size_t i = slot_of(key);
            while (slots_[i].stamp == generation_) {
                if (slots_[i].key == key) {
                    const auto prev = slots_[i].head;
                    slots_[i].head = head;
                    return prev;
                }
                i = (i + 1) & mask_;
            }
            slots_[i] = {key, head, generation_};
            ++size_;
            return kEnd;
        }

      private:
        struct Slot {
            std::uint64_t key = 0;
            std::uint32_t head = kEnd;
            std::uint32_t stamp = 0;
        };

        static std::size_t capacity_for(std::size_t expected) {
            std::size_t cap = 16;
            while (cap < 2 * expected) cap *= 2;
            return cap;
        }
        [[nodiscard]] std::size_t slot_of(std::uint64_t key) const noexcept {
            return static_cast<std::size_t>((key * 0x9E3779B97F4A7C15ull) >> shift_);
        }
        void rebuild(std::size_t cap) {
            slots_.assign(cap, Slot{});
            mask_ = cap - 1;
            shift_ = 64;
            for (std::size_t c = cap; c > 1; c >>= 1) --shift_;
            generation_ = 1;
            size_ = 0;
        }
        void grow() {
            std::vector<Slot> live;
            live.reserve(size_);
            for (const auto& s : slots_)
                if (s.stamp == generation_) live.push_back(s);
            rebuild(slots_.size() * 2);
            for (const auto& s : live) {
                std::size_t i = slot_of(s.key);
                while (slots_[i].stamp == generation_) i = (i + 1) & mask_;
                slots_[i] = {s.key, s.head, generation_};
                ++size_;
            }
        }

        std::vector<Slot> slots_;
        std::size_t mask_ = 0;
        unsigned shift_ = 64;
        std::uint32_t generation_ = 1;
        std::size_t size_ = 0;
    };

    HeadTable heads_;
    std::vector<std::uint32_t> values_;
    std::vector<std::uint32_t> next_;
};

}  // namespace xi

#pragma once

#include "dbp/rational.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace dbp {

using BinId = std::int64_t;
using ItemId = std::int64_t;

struct StaticItem {
    ItemId id = 0;
    Rational size{1};
};

struct PackEvent {
    enum class Kind { Open, Close, Place };
    Kind kind;
    BinId bin;
    ItemId item;  // -1 for Open/Close

    friend bool operator==(const PackEvent&, const PackEvent&) = default;
};

inline const char* to_string(PackEvent::Kind k) {
    switch (k) {
        case PackEvent::Kind::Open: return "open";
        case PackEvent::Kind::Close: return "close";
        case PackEvent::Kind::Place: return "place";
    }
    return "?";
}

/// Online static bin packer that keeps at most `space_bound()` bins able to
/// accept items. Closed bins never reopen. Each placement reports the events
/// it caused, in order: closes, opens, then the placement itself.
class BoundedSpacePacker {
public:
    virtual ~BoundedSpacePacker() = default;

    virtual std::size_t space_bound() const = 0;

    std::vector<PackEvent> place(ItemId item, const Rational& size) {
        if (size <= 0 || size > 1) throw std::invalid_argument("item size must be in (0,1]");
        pending_.clear();
        BinId bin = choose_bin(size);
        emit({PackEvent::Kind::Place, bin, item});
        return pending_;
    }

    bool is_active(BinId bin) const { return active_.count(bin) != 0; }
    std::size_t active_count() const { return active_.size(); }
    std::size_t bins_opened() const { return static_cast<std::size_t>(next_bin_); }
    const std::vector<PackEvent>& log() const { return log_; }

protected:
    // Pick (opening if needed) the bin for an item of this size.
    virtual BinId choose_bin(const Rational& size) = 0;

    BinId open_bin() {
        BinId b = next_bin_++;
        active_.insert(b);
        emit({PackEvent::Kind::Open, b, -1});
        return b;
    }
    void close_bin(BinId b) {
        active_.erase(b);
        emit({PackEvent::Kind::Close, b, -1});
    }

private:
    void emit(PackEvent e) {
        pending_.push_back(e);
        log_.push_back(e);
    }

    BinId next_bin_ = 0;
    std::unordered_set<BinId> active_;
    std::vector<PackEvent> log_;
    std::vector<PackEvent> pending_;
};

using PackerFactory = std::function<std::unique_ptr<BoundedSpacePacker>()>;

/// One active bin; an item that does not fit closes it and opens a new one.
class NextFitPacker final : public BoundedSpacePacker {
public:
    std::size_t space_bound() const override { return 1; }

protected:
    BinId choose_bin(const Rational& size) override {
        if (!current_ || residual_ < size) {
            if (current_) close_bin(*current_);
            current_ = open_bin();
            residual_ = 1;
        }
        residual_ -= size;
        return *current_;
    }

private:
    std::optional<BinId> current_;
    Rational residual_{0};
};

/// Harmonic class of a size: j for size in (1/(j+1), 1/j] when j < k, else k.
inline int harmonic_class(const Rational& size, int k) {
    if (size <= 0 || size > 1) throw std::invalid_argument("size must be in (0,1]");
    std::int64_t j = size.denominator() / size.numerator();  // floor(1/size)
    return j >= k ? k : static_cast<int>(j);
}

/// Harmonic(k): one Next-Fit stream per size class, so at most k active bins.
/// Classes j < k hold exactly j items per bin; class k packs by capacity.
class HarmonicPacker final : public BoundedSpacePacker {
public:
    explicit HarmonicPacker(int k) : k_(k), classes_(static_cast<std::size_t>(k)) {
        if (k < 2) throw std::invalid_argument("Harmonic requires k >= 2");
    }

    std::size_t space_bound() const override { return static_cast<std::size_t>(k_); }
    int k() const { return k_; }

protected:
    BinId choose_bin(const Rational& size) override {
        ClassBin& c = classes_[static_cast<std::size_t>(harmonic_class(size, k_) - 1)];
        if (!c.bin || c.residual < size) {
            if (c.bin) close_bin(*c.bin);
            c.bin = open_bin();
            c.residual = 1;
        }
        c.residual -= size;
        return *c.bin;
    }

private:
    struct ClassBin {
        std::optional<BinId> bin;
        Rational residual{0};
    };
    int k_;
    std::vector<ClassBin> classes_;
};

inline PackerFactory next_fit_factory() {
    return [] { return std::make_unique<NextFitPacker>(); };
}

inline PackerFactory harmonic_factory(int k) {
    if (k < 2) throw std::invalid_argument("Harmonic requires k >= 2");
    return [k] { return std::make_unique<HarmonicPacker>(k); };
}

struct StaticPackResult {
    std::size_t bins = 0;
    std::vector<PackEvent> events;
};

inline StaticPackResult static_pack(std::span<const StaticItem> items, BoundedSpacePacker& packer) {
    for (const StaticItem& it : items) packer.place(it.id, it.size);
    return {packer.bins_opened(), packer.log()};
}

inline StaticPackResult static_pack(std::span<const StaticItem> items, const PackerFactory& factory) {
    auto packer = factory();
    return static_pack(items, *packer);
}

}  // namespace dbp

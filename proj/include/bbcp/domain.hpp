#ifndef BBCP_DOMAIN_HPP
#define BBCP_DOMAIN_HPP

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

namespace bbcp {

/// Dense index of a decision variable inside one model.
struct VarId {
    std::uint32_t index = 0;

    friend auto operator<=>(VarId, VarId) = default;
};

/// Result of a single domain update.
///
/// `WouldEmpty` is the wipeout signal: the update was refused and the
/// domain left untouched so the caller can attribute the failure.
enum class ChangeOutcome { Unchanged, Shrunk, WouldEmpty };

/**
 * @brief Integer finite domain: interval bounds plus a bitset for holes.
 *
 * Bits are indexed relative to the domain's initial minimum, so a domain
 * can only ever shrink inside its original range. A stored domain is
 * never empty.
 */
class FiniteDomain {
public:
    /// Interval domain `lo..hi`; requires `lo <= hi`.
    FiniteDomain(int lo, int hi);
    /// Domain holding exactly `values` (any order, duplicates allowed, non-empty).
    explicit FiniteDomain(std::span<const int> values);

    int min() const { return min_; }
    int max() const { return max_; }
    int size() const { return size_; }
    bool is_singleton() const { return size_ == 1; }
    bool contains(int v) const;

    /// Smallest member strictly greater than `v`, or `max() + 1` if none.
    int next(int v) const;
    std::vector<int> values() const;

    template <class F>
    void for_each(F&& f) const {
        for (int v = min_; v <= max_; v = next(v)) f(v);
    }

    // Raw mutators. They never produce an empty domain; DomainStore trails
    // state before calling them.
    ChangeOutcome remove(int v);
    ChangeOutcome assign(int v);
    ChangeOutcome tighten_min(int lb);
    ChangeOutcome tighten_max(int ub);

    friend bool operator==(const FiniteDomain&, const FiniteDomain&) = default;

private:
    friend class DomainStore;

    bool test(int v) const;
    void clear_bit(int v);
    int first_from(int v) const;  // first member >= v, or max_ + 1
    int last_upto(int v) const;   // last member <= v, or min_ - 1
    int count_range(int lo, int hi) const;

    int offset_ = 0;
    int min_ = 0;
    int max_ = 0;
    int size_ = 0;
    std::vector<std::uint64_t> bits_;
};

/**
 * @brief Variable domains with a trail for chronological backtracking.
 *
 * Each variable is saved at most once per level (timestamped), the first
 * time it is modified after a `push_level`. Changes made at level 0 are
 * permanent.
 */
class DomainStore {
public:
    explicit DomainStore(std::vector<FiniteDomain> initial);

    std::size_t num_vars() const { return domains_.size(); }
    const FiniteDomain& domain(VarId x) const { return domains_[x.index]; }
    const FiniteDomain& operator[](VarId x) const { return domains_[x.index]; }
    int size(VarId x) const { return domains_[x.index].size(); }
    bool is_bound(VarId x) const { return domains_[x.index].is_singleton(); }
    int value(VarId x) const { return domains_[x.index].min(); }

    ChangeOutcome remove_value(VarId x, int v);
    ChangeOutcome assign(VarId x, int v);
    ChangeOutcome tighten_min(VarId x, int lb);
    ChangeOutcome tighten_max(VarId x, int ub);

    /// Opens a new level and returns its number (root is 0).
    int push_level();
    /// Undoes every change made since `push_level` returned `level`; the
    /// current level becomes `level - 1`.
    void restore_to(int level);
    int level() const { return level_; }

    /// Natural log of the product of domain sizes.
    double search_space_log_size() const;
    bool all_bound() const;

    /// Variables shrunk since the last `clear_modified`, in first-change order.
    std::span<const VarId> modified() const { return modified_; }
    void clear_modified();

private:
    template <class Op>
    ChangeOutcome update(VarId x, Op&& op);
    void save(VarId x);

    struct TrailEntry {
        VarId var;
        int min;
        int max;
        int size;
        std::size_t words_begin;
    };

    std::vector<FiniteDomain> domains_;
    std::vector<TrailEntry> trail_;
    std::vector<std::uint64_t> trail_words_;
    std::vector<std::size_t> level_marks_;
    std::vector<std::uint64_t> stamp_;
    std::uint64_t epoch_ = 1;
    int level_ = 0;
    std::vector<VarId> modified_;
    std::vector<char> is_modified_;
};

}  // namespace bbcp

#endif

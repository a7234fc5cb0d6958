#include "bbcp/domain.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace bbcp {

namespace {
constexpr int kWordBits = 64;

std::size_t word_count(int lo, int hi) {
    return static_cast<std::size_t>(hi - lo) / kWordBits + 1;
}
}  // namespace

FiniteDomain::FiniteDomain(int lo, int hi)
    : offset_(lo), min_(lo), max_(hi), size_(hi - lo + 1) {
    if (lo > hi) throw std::invalid_argument("FiniteDomain: empty interval");
    bits_.assign(word_count(lo, hi), ~std::uint64_t{0});
    const int tail = (hi - lo + 1) % kWordBits;
    if (tail != 0) bits_.back() = (std::uint64_t{1} << tail) - 1;
}

FiniteDomain::FiniteDomain(std::span<const int> values) {
    if (values.empty()) throw std::invalid_argument("FiniteDomain: no values");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    offset_ = min_ = *lo;
    max_ = *hi;
    bits_.assign(word_count(min_, max_), 0);
    for (int v : values) {
        const int i = v - offset_;
        bits_[i / kWordBits] |= std::uint64_t{1} << (i % kWordBits);
    }
    size_ = count_range(min_, max_);
}

bool FiniteDomain::test(int v) const {
    const int i = v - offset_;
    return (bits_[i / kWordBits] >> (i % kWordBits)) & 1u;
}

void FiniteDomain::clear_bit(int v) {
    const int i = v - offset_;
    bits_[i / kWordBits] &= ~(std::uint64_t{1} << (i % kWordBits));
}

bool FiniteDomain::contains(int v) const {
    return v >= min_ && v <= max_ && test(v);
}

int FiniteDomain::first_from(int v) const {
    if (v < min_) v = min_;
    if (v > max_) return max_ + 1;
    int i = v - offset_;
    std::size_t w = i / kWordBits;
    std::uint64_t word = bits_[w] & (~std::uint64_t{0} << (i % kWordBits));
    while (word == 0) {
        if (++w == bits_.size()) return max_ + 1;
        word = bits_[w];
    }
    const int found = offset_ + static_cast<int>(w) * kWordBits + std::countr_zero(word);
    return found <= max_ ? found : max_ + 1;
}

int FiniteDomain::last_upto(int v) const {
    if (v > max_) v = max_;
    if (v < min_) return min_ - 1;
    int i = v - offset_;
    std::size_t w = i / kWordBits;
    const int shift = kWordBits - 1 - i % kWordBits;
    std::uint64_t word = bits_[w] & (~std::uint64_t{0} >> shift);
    while (word == 0) {
        if (w == 0) return min_ - 1;
        word = bits_[--w];
    }
    const int found =
        offset_ + static_cast<int>(w) * kWordBits + (kWordBits - 1 - std::countl_zero(word));
    return found >= min_ ? found : min_ - 1;
}

int FiniteDomain::count_range(int lo, int hi) const {
    int total = 0;
    for (int v = first_from(lo); v <= hi; v = first_from(v + 1)) ++total;
    return total;
}

int FiniteDomain::next(int v) const { return first_from(v + 1); }

std::vector<int> FiniteDomain::values() const {
    std::vector<int> out;
    out.reserve(size_);
    for_each([&](int v) { out.push_back(v); });
    return out;
}

ChangeOutcome FiniteDomain::remove(int v) {
    if (!contains(v)) return ChangeOutcome::Unchanged;
    if (size_ == 1) return ChangeOutcome::WouldEmpty;
    clear_bit(v);
    --size_;
    if (v == min_) min_ = first_from(v + 1);
    if (v == max_) max_ = last_upto(v - 1);
    return ChangeOutcome::Shrunk;
}

ChangeOutcome FiniteDomain::assign(int v) {
    if (!contains(v)) return ChangeOutcome::WouldEmpty;
    if (size_ == 1) return ChangeOutcome::Unchanged;
    std::fill(bits_.begin(), bits_.end(), 0);
    const int i = v - offset_;
    bits_[i / kWordBits] = std::uint64_t{1} << (i % kWordBits);
    min_ = max_ = v;
    size_ = 1;
    return ChangeOutcome::Shrunk;
}

ChangeOutcome FiniteDomain::tighten_min(int lb) {
    if (lb <= min_) return ChangeOutcome::Unchanged;
    const int first = first_from(lb);
    if (first > max_) return ChangeOutcome::WouldEmpty;
    for (int v = min_; v < first; v = first_from(v + 1)) {
        clear_bit(v);
        --size_;
    }
    min_ = first;
    return ChangeOutcome::Shrunk;
}

ChangeOutcome FiniteDomain::tighten_max(int ub) {
    if (ub >= max_) return ChangeOutcome::Unchanged;
    const int last = last_upto(ub);
    if (last < min_) return ChangeOutcome::WouldEmpty;
    for (int v = first_from(last + 1); v <= max_; v = first_from(v + 1)) {
        clear_bit(v);
        --size_;
    }
    max_ = last;
    return ChangeOutcome::Shrunk;
}

DomainStore::DomainStore(std::vector<FiniteDomain> initial)
    : domains_(std::move(initial)),
      stamp_(domains_.size(), 0),
      is_modified_(domains_.size(), 0) {}

void DomainStore::save(VarId x) {
    if (level_ == 0 || stamp_[x.index] == epoch_) return;
    stamp_[x.index] = epoch_;
    const FiniteDomain& d = domains_[x.index];
    trail_.push_back({x, d.min_, d.max_, d.size_, trail_words_.size()});
    trail_words_.insert(trail_words_.end(), d.bits_.begin(), d.bits_.end());
}

template <class Op>
ChangeOutcome DomainStore::update(VarId x, Op&& op) {
    assert(x.index < domains_.size());
    // Callers have already ruled out Unchanged and WouldEmpty.
    save(x);
    [[maybe_unused]] const ChangeOutcome out = op(domains_[x.index]);
    assert(out == ChangeOutcome::Shrunk);
    if (!is_modified_[x.index]) {
        is_modified_[x.index] = 1;
        modified_.push_back(x);
    }
    return ChangeOutcome::Shrunk;
}

ChangeOutcome DomainStore::remove_value(VarId x, int v) {
    const FiniteDomain& d = domains_[x.index];
    if (!d.contains(v)) return ChangeOutcome::Unchanged;
    if (d.size() == 1) return ChangeOutcome::WouldEmpty;
    return update(x, [v](FiniteDomain& dom) { return dom.remove(v); });
}

ChangeOutcome DomainStore::assign(VarId x, int v) {
    const FiniteDomain& d = domains_[x.index];
    if (!d.contains(v)) return ChangeOutcome::WouldEmpty;
    if (d.size() == 1) return ChangeOutcome::Unchanged;
    return update(x, [v](FiniteDomain& dom) { return dom.assign(v); });
}

ChangeOutcome DomainStore::tighten_min(VarId x, int lb) {
    const FiniteDomain& d = domains_[x.index];
    if (lb <= d.min()) return ChangeOutcome::Unchanged;
    if (lb > d.max()) return ChangeOutcome::WouldEmpty;
    return update(x, [lb](FiniteDomain& dom) { return dom.tighten_min(lb); });
}

ChangeOutcome DomainStore::tighten_max(VarId x, int ub) {
    const FiniteDomain& d = domains_[x.index];
    if (ub >= d.max()) return ChangeOutcome::Unchanged;
    if (ub < d.min()) return ChangeOutcome::WouldEmpty;
    return update(x, [ub](FiniteDomain& dom) { return dom.tighten_max(ub); });
}

int DomainStore::push_level() {
    level_marks_.push_back(trail_.size());
    ++epoch_;
    return ++level_;
}

void DomainStore::restore_to(int level) {
    if (level < 1 || level > level_) throw std::out_of_range("DomainStore::restore_to: bad level");
    const std::size_t mark = level_marks_[level - 1];
    while (trail_.size() > mark) {
        const TrailEntry& e = trail_.back();
        FiniteDomain& d = domains_[e.var.index];
        d.min_ = e.min;
        d.max_ = e.max;
        d.size_ = e.size;
        std::copy_n(trail_words_.begin() + static_cast<std::ptrdiff_t>(e.words_begin),
                    d.bits_.size(), d.bits_.begin());
        trail_words_.resize(e.words_begin);
        trail_.pop_back();
    }
    level_marks_.resize(level - 1);
    level_ = level - 1;
    ++epoch_;
}

double DomainStore::search_space_log_size() const {
    double total = 0.0;
    for (const auto& d : domains_)
        if (d.size() > 1) total += std::log(static_cast<double>(d.size()));
    return total;
}

bool DomainStore::all_bound() const {
    return std::all_of(domains_.begin(), domains_.end(),
                       [](const FiniteDomain& d) { return d.is_singleton(); });
}

void DomainStore::clear_modified() {
    for (VarId x : modified_) is_modified_[x.index] = 0;
    modified_.clear();
}

}  // namespace bbcp

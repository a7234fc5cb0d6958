#ifndef BBCP_SRC_HEURISTICS_SELECT_HPP
#define BBCP_SRC_HEURISTICS_SELECT_HPP

#include <cstdint>
#include <optional>
#include <random>

#include "bbcp/heuristics.hpp"

namespace bbcp::detail {

/// Uniform choice among the best-scoring candidates (reservoir sampling
/// over ties). `Compare(a, b)` returns >0 when score a is strictly better.
template <class Item, class Score, class Compare>
class RandomBest {
public:
    explicit RandomBest(Compare compare) : compare_(compare) {}

    void offer(const Item& item, const Score& score, Rng& rng) {
        if (!best_) {
            best_ = score;
            item_ = item;
            ties_ = 1;
            return;
        }
        const int c = compare_(score, *best_);
        if (c > 0) {
            best_ = score;
            item_ = item;
            ties_ = 1;
        } else if (c == 0) {
            ++ties_;
            if (std::uniform_int_distribution<std::uint64_t>(0, ties_ - 1)(rng) == 0) item_ = item;
        }
    }

    bool empty() const { return !best_.has_value(); }
    const Item& item() const { return item_; }

private:
    Compare compare_;
    std::optional<Score> best_;
    Item item_{};
    std::uint64_t ties_ = 0;
};

inline int compare_greater(double a, double b) { return a > b ? 1 : (a < b ? -1 : 0); }
inline int compare_less(double a, double b) { return a < b ? 1 : (a > b ? -1 : 0); }

}  // namespace bbcp::detail

#endif

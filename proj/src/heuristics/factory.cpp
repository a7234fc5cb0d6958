#include "bbcp/heuristics.hpp"

namespace bbcp {

std::unique_ptr<Heuristic> make_heuristic(HeuristicKind kind, const Model& model,
                                          const HeuristicParams& params) {
    switch (kind) {
        case HeuristicKind::Abs: return std::make_unique<AbsHeuristic>(model, params);
        case HeuristicKind::Ibs: return std::make_unique<IbsHeuristic>(model, params.alpha);
        case HeuristicKind::Wdeg: return std::make_unique<WdegHeuristic>(model);
    }
    return nullptr;
}

std::string_view to_string(HeuristicKind kind) {
    switch (kind) {
        case HeuristicKind::Abs: return "abs";
        case HeuristicKind::Ibs: return "ibs";
        case HeuristicKind::Wdeg: return "wdeg";
    }
    return "?";
}

std::optional<HeuristicKind> parse_heuristic_kind(std::string_view s) {
    if (s == "abs") return HeuristicKind::Abs;
    if (s == "ibs") return HeuristicKind::Ibs;
    if (s == "wdeg") return HeuristicKind::Wdeg;
    return std::nullopt;
}

}  // namespace bbcp

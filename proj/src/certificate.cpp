#include "cleandec/certificate.hpp"

#include <string>

#include "cleandec/errors.hpp"

namespace cleandec {

std::string_view to_string(CleanMode mode) {
    switch (mode) {
        case CleanMode::Clean: return "clean";
        case CleanMode::Strong: return "strong";
        case CleanMode::Star: return "star";
        case CleanMode::AlmostStar: return "almost-star";
        case CleanMode::ScalarPlusSmall: return "scalar-plus-small";
    }
    return "clean";
}

CleanMode parse_mode(std::string_view name) {
    for (CleanMode m : {CleanMode::Clean, CleanMode::Strong, CleanMode::Star, CleanMode::AlmostStar,
                        CleanMode::ScalarPlusSmall}) {
        if (name == to_string(m)) return m;
    }
    throw InputError("unknown mode '" + std::string(name) + "'");
}

}  // namespace cleandec

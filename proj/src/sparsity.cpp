#include "zap/sparsity.hpp"

#include <cmath>

namespace zap {

void MeasureSpec::validate() const {
    switch (kind) {
        case MeasureKind::M1:
        case MeasureKind::Hoyer:
            return;
        case MeasureKind::M2:
            if (!(p >= 0.0 && p < 1.0))
                throw ParameterError("measure M2 requires 0 <= p < 1, got p=" + std::to_string(p));
            if (!(sigma >= 0.0) || !std::isfinite(sigma))
                throw ParameterError("measure M2 requires sigma >= 0, got sigma=" +
                                     std::to_string(sigma));
            return;
        case MeasureKind::M3:
        case MeasureKind::M4:
        case MeasureKind::M5:
        case MeasureKind::M6:
            if (!(sigma > 0.0) || !std::isfinite(sigma))
                throw ParameterError("measure " + std::string(to_string(kind)) +
                                     " requires sigma > 0, got sigma=" + std::to_string(sigma));
            return;
    }
}

std::string_view to_string(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::M1: return "M1";
        case MeasureKind::M2: return "M2";
        case MeasureKind::M3: return "M3";
        case MeasureKind::M4: return "M4";
        case MeasureKind::M5: return "M5";
        case MeasureKind::M6: return "M6";
        case MeasureKind::Hoyer: return "HOYER";
    }
    return "?";
}

MeasureKind parse_measure_kind(std::string_view name) {
    for (auto k : {MeasureKind::M1, MeasureKind::M2, MeasureKind::M3, MeasureKind::M4,
                   MeasureKind::M5, MeasureKind::M6, MeasureKind::Hoyer})
        if (name == to_string(k)) return k;
    throw ParameterError("unknown sparseness measure '" + std::string(name) + "'");
}

}  // namespace zap

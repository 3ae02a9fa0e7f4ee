#include "lcr/error.hpp"

namespace lcr {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Schema: return "schema";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::InsufficientData: return "insufficient-data";
        case ErrorKind::DegeneratePredictor: return "degenerate-predictor";
        case ErrorKind::DegenerateColumn: return "degenerate-column";
        case ErrorKind::DegenerateSplit: return "degenerate-split";
        case ErrorKind::Domain: return "domain";
        case ErrorKind::SingularDesign: return "singular-design";
        case ErrorKind::Config: return "config";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

}  // namespace lcr

#pragma once

#include <stdexcept>
#include <string>

namespace amc {

enum class ErrorCode {
    Argument,
    Config,
    Shape,
    Degenerate,
    EmptyMask,
    Numeric,
    InsufficientData,
    Convergence,
    Format,
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::Argument:         return "argument";
        case ErrorCode::Config:           return "config";
        case ErrorCode::Shape:            return "shape";
        case ErrorCode::Degenerate:       return "degenerate";
        case ErrorCode::EmptyMask:        return "empty-mask";
        case ErrorCode::Numeric:          return "numeric";
        case ErrorCode::InsufficientData: return "insufficient-data";
        case ErrorCode::Convergence:      return "convergence";
        case ErrorCode::Format:           return "format";
        case ErrorCode::Io:               return "io";
    }
    return "unknown";
}

}  // namespace amc

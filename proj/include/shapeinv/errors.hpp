#pragma once

#include <stdexcept>
#include <string>

namespace shapeinv {

struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

struct MeshingError : std::runtime_error {
    explicit MeshingError(const std::string& msg) : std::runtime_error(msg) {}
};

struct TopologyError : std::runtime_error {
    explicit TopologyError(const std::string& msg) : std::runtime_error(msg) {}
};

// Recoverable: the descent loop catches this, shrinks dt and retries.
struct ReversedTriangleError : std::runtime_error {
    double min_signed_area;
    explicit ReversedTriangleError(double area)
        : std::runtime_error("mesh deformation produced a non-positive triangle"),
          min_signed_area(area) {}
};

struct SolverError : std::runtime_error {
    double residual;
    SolverError(const std::string& msg, double res)
        : std::runtime_error(msg), residual(res) {}
};

struct DegenerateFieldError : std::runtime_error {
    explicit DegenerateFieldError(const std::string& msg) : std::runtime_error(msg) {}
};

struct StalledError : std::runtime_error {
    explicit StalledError(const std::string& msg) : std::runtime_error(msg) {}
};

struct StepUnderflowError : std::runtime_error {
    explicit StepUnderflowError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParseError : std::runtime_error {
    long line;
    ParseError(const std::string& msg, long line_no)
        : std::runtime_error(msg), line(line_no) {}
};

} // namespace shapeinv

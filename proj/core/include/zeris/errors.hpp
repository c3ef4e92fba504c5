#ifndef ZERIS_ERRORS_HPP
#define ZERIS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace zeris {

/// Thrown when a configuration admits no feasible operating point
/// (e.g. the harvested energy cannot cover consumption at any split).
class infeasible_error : public std::runtime_error {
public:
    explicit infeasible_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an element-count search exhausts its range without
/// meeting the requested target.
class search_exhausted_error : public std::runtime_error {
public:
    explicit search_exhausted_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a Gamma moment match is requested for a (numerically)
/// deterministic random variable.
class degenerate_variance_error : public std::runtime_error {
public:
    explicit degenerate_variance_error(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration ingestion failure; carries the offending field name.
class config_error : public std::runtime_error {
public:
    config_error(std::string field_name, const std::string& what)
        : std::runtime_error(what), field(std::move(field_name)) {}
    std::string field;
};

}  // namespace zeris

#endif

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "starflow/series.hpp"

namespace starflow {

// {"order": N, "coeffs": [[{"mono": "qS^2*pB", "re": r, "im": i}, ...], ...]},
// one inner array per hbar-order, terms in graded-lex order.
nlohmann::json series_to_json(const FormalSeries& s);

// A (time, series) table, one record per grid point.
using SeriesTable = std::vector<std::pair<double, FormalSeries>>;

// CSV with header t,hbar_order,monomial,re,im; one row per nonzero term.
void write_series_csv(std::ostream& out, const SeriesTable& table);

// JSON mirror of the CSV table, wrapping the core series serialization.
nlohmann::json series_table_json(const std::string& observable,
                                 const std::string& state,
                                 const SeriesTable& table);

}  // namespace starflow

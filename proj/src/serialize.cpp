#include "starflow/serialize.hpp"

#include <cstdio>
#include <ostream>

namespace starflow {

nlohmann::json series_to_json(const FormalSeries& s) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (int k = 0; k <= s.order(); ++k) {
    nlohmann::json level = nlohmann::json::array();
    for (const auto& [mono, c] : s.at(k).terms()) {
      std::complex<double> v = c.to_complex();
      level.push_back({{"mono", mono.to_string(s.frame())},
                       {"re", v.real()},
                       {"im", v.imag()}});
    }
    coeffs.push_back(std::move(level));
  }
  return {{"order", s.order()}, {"coeffs", std::move(coeffs)}};
}

void write_series_csv(std::ostream& out, const SeriesTable& table) {
  out << "t,hbar_order,monomial,re,im\n";
  for (const auto& [t, series] : table) {
    for (int k = 0; k <= series.order(); ++k) {
      for (const auto& [mono, c] : series.at(k).terms()) {
        std::complex<double> v = c.to_complex();
        out << format_double(t) << ',' << k << ','
            << mono.to_string(series.frame()) << ',' << format_double(v.real())
            << ',' << format_double(v.imag()) << '\n';
      }
    }
  }
}

nlohmann::json series_table_json(const std::string& observable,
                                 const std::string& state,
                                 const SeriesTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& [t, series] : table)
    rows.push_back({{"t", t}, {"series", series_to_json(series)}});
  nlohmann::json out = {{"observable", observable}, {"rows", std::move(rows)}};
  if (!state.empty()) out["state"] = state;
  return out;
}

}  // namespace starflow

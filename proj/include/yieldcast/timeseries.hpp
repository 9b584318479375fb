#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace yieldcast {

inline constexpr int kDekadsPerYear = 36;

// Near-10-day period of a calendar year: days 1-10, 11-20, 21-end of month.
struct DekadIndex {
    int year = 0;
    int dekad = 1;  // 1..36

    auto operator<=>(const DekadIndex&) const = default;

    int month() const { return (dekad + 2) / 3; }
    // Consecutive integer over all dekads, for distances and iteration.
    long ordinal() const { return static_cast<long>(year) * kDekadsPerYear + (dekad - 1); }
    static DekadIndex from_ordinal(long ordinal);
    DekadIndex next() const { return from_ordinal(ordinal() + 1); }
    std::chrono::year_month_day first_day() const;
};

DekadIndex dekad_of_date(std::chrono::year_month_day date);

enum class Variable { NDVI, Rain, T, Tmin, Tmax, Rad };
inline constexpr std::size_t kVariableCount = 6;
inline constexpr Variable kAllVariables[] = {Variable::NDVI, Variable::Rain, Variable::T,
                                             Variable::Tmin, Variable::Tmax, Variable::Rad};

std::string_view to_string(Variable v);
std::optional<Variable> parse_variable(std::string_view name);

struct AdminUnit {
    std::string id;
    std::string name;
    double production_weight = 0.0;  // tonnes
};

struct DekadalSeries {
    std::string unit;
    Variable variable = Variable::NDVI;
    std::map<DekadIndex, double> samples;

    std::optional<double> at(DekadIndex d) const;
};

struct YieldRecord {
    std::string unit;
    int year = 0;
    double yield = 0.0;  // t/ha

    auto operator<=>(const YieldRecord&) const = default;
};

struct YieldTable {
    std::string crop;
    std::vector<YieldRecord> records;  // sorted by (unit, year)

    std::vector<int> years() const;  // sorted distinct
    double mean_yield() const;
};

// Average growing season on the dekad-of-year axis. A window with sos > eos
// crosses the calendar boundary; its dekads before the boundary belong to the
// season labeled by the following (harvest) year.
struct SeasonWindow {
    int sos = 32;  // dekad of year, 1..36
    int eos = 17;
    double sos_sd = 0.0;
    double eos_sd = 0.0;

    bool crosses_year() const { return sos > eos; }
    int length() const;  // dekads, inclusive
    DekadIndex first_dekad(int harvest_year) const;
    DekadIndex last_dekad(int harvest_year) const;

    // Whole calendar months from month(sos) to month(eos): the feature axis.
    int start_month() const { return (sos + 2) / 3; }
    int n_months() const;
    // First dekad of season-axis month `k` (1-based) for a harvest year.
    DekadIndex month_first_dekad(int harvest_year, int k) const;
    int calendar_month(int k) const;
};

std::string month_abbrev(int calendar_month);

class Dataset {
public:
    Dataset() = default;
    Dataset(std::vector<AdminUnit> units, std::vector<DekadalSeries> series, YieldTable yields,
            SeasonWindow season);

    const std::vector<AdminUnit>& units() const { return units_; }
    const std::vector<DekadalSeries>& series() const { return series_; }
    const YieldTable& yields() const { return yields_; }
    const SeasonWindow& season() const { return season_; }

    const AdminUnit* find_unit(std::string_view id) const;
    // Throws CoverageGap if the unit has no series for the variable.
    const DekadalSeries& series_for(std::string_view unit, Variable v) const;
    bool has_series(std::string_view unit, Variable v) const;

    // All six variables present for every yield unit and >= 3 yield years per
    // unit; required before feature building and cross-validation.
    void require_complete() const;

    // Units that appear in the yield table, sorted by id.
    std::vector<std::string> yield_units() const;

    // Same data, different season window; re-validates coverage.
    Dataset with_season(SeasonWindow season) const;
    Dataset with_yields(YieldTable yields) const;

private:
    void index_and_validate();

    std::vector<AdminUnit> units_;
    std::vector<DekadalSeries> series_;
    YieldTable yields_;
    SeasonWindow season_;
    std::map<std::pair<std::string, Variable>, std::size_t> series_index_;
};

struct DatasetCsv {
    std::string timeseries;
    std::string yields;
    std::string units;
};

// Validates schema, ranges and referential integrity. When `crop` is empty the
// yields file must hold exactly one crop. Coverage of the season months is
// checked for every yield record.
Dataset parse_dataset(std::string_view timeseries_csv, std::string_view yields_csv,
                      std::string_view units_csv, const SeasonWindow& season = {},
                      std::string_view crop = {});

DatasetCsv serialize_dataset(const Dataset& ds);

// Values of the window for one season, in dekad order. Throws CoverageGap.
std::vector<double> slice_season(const DekadalSeries& series, int harvest_year, const SeasonWindow& window);

// Values over an explicit inclusive dekad range. Throws CoverageGap.
std::vector<double> slice_range(const DekadalSeries& series, DekadIndex first, DekadIndex last);

}  // namespace yieldcast

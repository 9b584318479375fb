#include "yieldcast/timeseries.hpp"

#include "yieldcast/csv.hpp"
#include "yieldcast/error.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace yieldcast {

namespace {

const std::vector<std::string> kTimeseriesHeader{"unit_id", "variable", "year", "dekad", "value"};
const std::vector<std::string> kYieldsHeader{"unit_id", "crop", "year", "yield_t_ha"};
const std::vector<std::string> kUnitsHeader{"unit_id", "name", "production_weight_t"};

long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

void check_sample_range(Variable v, double value, std::size_t line) {
    bool ok = true;
    switch (v) {
    case Variable::NDVI: ok = value >= -0.2 && value <= 1.0; break;
    case Variable::Rain:
    case Variable::Rad: ok = value >= 0.0; break;
    default: break;
    }
    if (!ok) {
        fail(ErrorCode::MalformedRow, "line " + std::to_string(line) + ": " + std::string(to_string(v)) +
                                          " value " + csv::format_number(value) + " out of range");
    }
}

}  // namespace

DekadIndex DekadIndex::from_ordinal(long ordinal) {
    const long year = floor_div(ordinal, kDekadsPerYear);
    return DekadIndex{static_cast<int>(year), static_cast<int>(ordinal - year * kDekadsPerYear) + 1};
}

std::chrono::year_month_day DekadIndex::first_day() const {
    const int slot = (dekad - 1) % 3;
    return std::chrono::year_month_day{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month())},
                                       std::chrono::day{static_cast<unsigned>(1 + 10 * slot)}};
}

DekadIndex dekad_of_date(std::chrono::year_month_day date) {
    const int month = static_cast<int>(static_cast<unsigned>(date.month()));
    const int day = static_cast<int>(static_cast<unsigned>(date.day()));
    const int slot = day <= 10 ? 1 : (day <= 20 ? 2 : 3);
    return DekadIndex{static_cast<int>(date.year()), 3 * (month - 1) + slot};
}

std::string_view to_string(Variable v) {
    switch (v) {
    case Variable::NDVI: return "NDVI";
    case Variable::Rain: return "Rain";
    case Variable::T: return "T";
    case Variable::Tmin: return "Tmin";
    case Variable::Tmax: return "Tmax";
    case Variable::Rad: return "Rad";
    }
    return "?";
}

std::optional<Variable> parse_variable(std::string_view name) {
    for (auto v : kAllVariables) {
        if (to_string(v) == name) return v;
    }
    return std::nullopt;
}

std::optional<double> DekadalSeries::at(DekadIndex d) const {
    const auto it = samples.find(d);
    if (it == samples.end()) return std::nullopt;
    return it->second;
}

std::vector<int> YieldTable::years() const {
    std::set<int> ys;
    for (const auto& r : records) ys.insert(r.year);
    return {ys.begin(), ys.end()};
}

double YieldTable::mean_yield() const {
    if (records.empty()) return 0.0;
    double s = 0.0;
    for (const auto& r : records) s += r.yield;
    return s / static_cast<double>(records.size());
}

int SeasonWindow::length() const {
    return crosses_year() ? (kDekadsPerYear - sos + 1) + eos : eos - sos + 1;
}

DekadIndex SeasonWindow::first_dekad(int harvest_year) const {
    return DekadIndex{crosses_year() ? harvest_year - 1 : harvest_year, sos};
}

DekadIndex SeasonWindow::last_dekad(int harvest_year) const {
    return DekadIndex{harvest_year, eos};
}

int SeasonWindow::n_months() const {
    const int end_month = (eos + 2) / 3;
    return crosses_year() ? (12 - start_month() + 1) + end_month : end_month - start_month() + 1;
}

DekadIndex SeasonWindow::month_first_dekad(int harvest_year, int k) const {
    const DekadIndex start{crosses_year() ? harvest_year - 1 : harvest_year, 3 * (start_month() - 1) + 1};
    return DekadIndex::from_ordinal(start.ordinal() + 3L * (k - 1));
}

int SeasonWindow::calendar_month(int k) const {
    return (start_month() - 1 + (k - 1)) % 12 + 1;
}

std::string month_abbrev(int calendar_month) {
    static const char* names[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                  "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};
    return names[(calendar_month - 1) % 12];
}

Dataset::Dataset(std::vector<AdminUnit> units, std::vector<DekadalSeries> series, YieldTable yields,
                 SeasonWindow season)
    : units_(std::move(units)), series_(std::move(series)), yields_(std::move(yields)), season_(season) {
    index_and_validate();
}

void Dataset::index_and_validate() {
    if (season_.sos < 1 || season_.sos > kDekadsPerYear || season_.eos < 1 || season_.eos > kDekadsPerYear ||
        season_.length() < 3) {
        fail(ErrorCode::InvalidConfig, "season window must span 3..36 dekads");
    }
    std::sort(units_.begin(), units_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < units_.size(); ++i) {
        if (units_[i].production_weight < 0.0) {
            fail(ErrorCode::MalformedRow, "unit '" + units_[i].id + "' has negative production weight");
        }
        if (i > 0 && units_[i].id == units_[i - 1].id) {
            fail(ErrorCode::DuplicateSample, "duplicate unit id '" + units_[i].id + "'");
        }
    }
    std::sort(series_.begin(), series_.end(), [](const auto& a, const auto& b) {
        return std::tie(a.unit, a.variable) < std::tie(b.unit, b.variable);
    });
    series_index_.clear();
    for (std::size_t i = 0; i < series_.size(); ++i) {
        const auto& s = series_[i];
        if (!find_unit(s.unit)) fail(ErrorCode::UnknownUnit, "series references unit '" + s.unit + "'");
        if (!series_index_.emplace(std::make_pair(s.unit, s.variable), i).second) {
            fail(ErrorCode::DuplicateSample, "two series for unit '" + s.unit + "' variable " +
                                                 std::string(to_string(s.variable)));
        }
    }

    std::sort(yields_.records.begin(), yields_.records.end());
    for (std::size_t i = 0; i < yields_.records.size(); ++i) {
        const auto& r = yields_.records[i];
        if (!find_unit(r.unit)) fail(ErrorCode::UnknownUnit, "yield record references unit '" + r.unit + "'");
        if (!(r.yield > 0.0)) {
            fail(ErrorCode::MalformedRow, "non-positive yield for unit '" + r.unit + "' year " +
                                              std::to_string(r.year));
        }
        if (i > 0 && r.unit == yields_.records[i - 1].unit && r.year == yields_.records[i - 1].year) {
            fail(ErrorCode::DuplicateSample, "two yields for unit '" + r.unit + "' year " + std::to_string(r.year));
        }
    }

    // Every series a yield record can draw on must cover that season's months.
    const int n_months = season_.n_months();
    for (const auto& r : yields_.records) {
        const auto first = season_.month_first_dekad(r.year, 1);
        const auto last = DekadIndex::from_ordinal(season_.month_first_dekad(r.year, n_months).ordinal() + 2);
        for (auto v : kAllVariables) {
            const auto it = series_index_.find({r.unit, v});
            if (it != series_index_.end()) slice_range(series_[it->second], first, last);
        }
    }
}

void Dataset::require_complete() const {
    std::map<std::string, int> years_per_unit;
    for (const auto& r : yields_.records) ++years_per_unit[r.unit];
    for (const auto& [unit, n] : years_per_unit) {
        for (auto v : kAllVariables) {
            if (!has_series(unit, v)) {
                fail(ErrorCode::CoverageGap, "unit '" + unit + "' has no " + std::string(to_string(v)) + " series");
            }
        }
        if (n < 3) {
            fail(ErrorCode::TooFewYears, "unit '" + unit + "' has " + std::to_string(n) + " yield years, need >= 3");
        }
    }
}

const AdminUnit* Dataset::find_unit(std::string_view id) const {
    const auto it = std::lower_bound(units_.begin(), units_.end(), id,
                                     [](const AdminUnit& u, std::string_view key) { return u.id < key; });
    return (it != units_.end() && it->id == id) ? &*it : nullptr;
}

bool Dataset::has_series(std::string_view unit, Variable v) const {
    return series_index_.count({std::string(unit), v}) > 0;
}

const DekadalSeries& Dataset::series_for(std::string_view unit, Variable v) const {
    const auto it = series_index_.find({std::string(unit), v});
    if (it == series_index_.end()) {
        fail(ErrorCode::CoverageGap, "unit '" + std::string(unit) + "' has no " + std::string(to_string(v)) + " series");
    }
    return series_[it->second];
}

std::vector<std::string> Dataset::yield_units() const {
    std::set<std::string> ids;
    for (const auto& r : yields_.records) ids.insert(r.unit);
    return {ids.begin(), ids.end()};
}

Dataset Dataset::with_season(SeasonWindow season) const {
    return Dataset(units_, series_, yields_, season);
}

Dataset Dataset::with_yields(YieldTable yields) const {
    return Dataset(units_, series_, std::move(yields), season_);
}

Dataset parse_dataset(std::string_view timeseries_csv, std::string_view yields_csv, std::string_view units_csv,
                      const SeasonWindow& season, std::string_view crop) {
    std::vector<AdminUnit> units;
    for (const auto& row : csv::read(units_csv, kUnitsHeader)) {
        if (row.fields[0].empty()) fail(ErrorCode::MalformedRow, "line " + std::to_string(row.line) + ": empty unit_id");
        const double w = csv::parse_double(row.fields[2], row.line);
        if (w < 0.0) {
            fail(ErrorCode::MalformedRow, "line " + std::to_string(row.line) + ": negative production weight");
        }
        units.push_back(AdminUnit{row.fields[0], row.fields[1], w});
    }
    std::set<std::string> unit_ids;
    for (const auto& u : units) {
        if (!unit_ids.insert(u.id).second) fail(ErrorCode::DuplicateSample, "duplicate unit id '" + u.id + "'");
    }

    std::map<std::pair<std::string, Variable>, DekadalSeries> series;
    for (const auto& row : csv::read(timeseries_csv, kTimeseriesHeader)) {
        const auto var = parse_variable(row.fields[1]);
        if (!var) {
            fail(ErrorCode::MalformedRow, "line " + std::to_string(row.line) + ": unknown variable '" +
                                              row.fields[1] + "'");
        }
        if (!unit_ids.count(row.fields[0])) {
            fail(ErrorCode::UnknownUnit, "line " + std::to_string(row.line) + ": unit '" + row.fields[0] +
                                             "' not in units file");
        }
        const int year = csv::parse_int(row.fields[2], row.line);
        const int dekad = csv::parse_int(row.fields[3], row.line);
        if (dekad < 1 || dekad > kDekadsPerYear) {
            fail(ErrorCode::MalformedRow, "line " + std::to_string(row.line) + ": dekad out of range");
        }
        const double value = csv::parse_double(row.fields[4], row.line);
        check_sample_range(*var, value, row.line);
        auto& s = series[{row.fields[0], *var}];
        s.unit = row.fields[0];
        s.variable = *var;
        if (!s.samples.emplace(DekadIndex{year, dekad}, value).second) {
            fail(ErrorCode::DuplicateSample, "line " + std::to_string(row.line) + ": duplicate sample");
        }
    }

    YieldTable yields;
    std::set<std::string> crops;
    std::vector<std::pair<std::string, YieldRecord>> all;
    for (const auto& row : csv::read(yields_csv, kYieldsHeader)) {
        const int year = csv::parse_int(row.fields[2], row.line);
        const double y = csv::parse_double(row.fields[3], row.line);
        if (!(y > 0.0)) fail(ErrorCode::MalformedRow, "line " + std::to_string(row.line) + ": yield must be > 0");
        if (!unit_ids.count(row.fields[0])) {
            fail(ErrorCode::UnknownUnit, "line " + std::to_string(row.line) + ": unit '" + row.fields[0] +
                                             "' not in units file");
        }
        crops.insert(row.fields[1]);
        all.emplace_back(row.fields[1], YieldRecord{row.fields[0], year, y});
    }
    if (crop.empty()) {
        if (crops.size() > 1) {
            fail(ErrorCode::InvalidConfig, "yields file holds several crops; select one with --crop");
        }
        yields.crop = crops.empty() ? std::string{} : *crops.begin();
    } else {
        if (!crops.count(std::string(crop))) {
            fail(ErrorCode::InputMissing, "no yield records for crop '" + std::string(crop) + "'");
        }
        yields.crop = std::string(crop);
    }
    for (auto& [c, r] : all) {
        if (c == yields.crop) yields.records.push_back(std::move(r));
    }

    std::vector<DekadalSeries> flat;
    flat.reserve(series.size());
    for (auto& [key, s] : series) flat.push_back(std::move(s));
    return Dataset(std::move(units), std::move(flat), std::move(yields), season);
}

DatasetCsv serialize_dataset(const Dataset& ds) {
    DatasetCsv out;
    std::ostringstream ts;
    ts << "unit_id,variable,year,dekad,value\n";
    for (const auto& s : ds.series()) {
        for (const auto& [d, v] : s.samples) {
            ts << s.unit << ',' << to_string(s.variable) << ',' << d.year << ',' << d.dekad << ','
               << csv::format_number(v) << '\n';
        }
    }
    out.timeseries = ts.str();

    std::ostringstream ys;
    ys << "unit_id,crop,year,yield_t_ha\n";
    for (const auto& r : ds.yields().records) {
        ys << r.unit << ',' << ds.yields().crop << ',' << r.year << ',' << csv::format_number(r.yield) << '\n';
    }
    out.yields = ys.str();

    std::ostringstream us;
    us << "unit_id,name,production_weight_t\n";
    for (const auto& u : ds.units()) {
        us << u.id << ',' << u.name << ',' << csv::format_number(u.production_weight) << '\n';
    }
    out.units = us.str();
    return out;
}

std::vector<double> slice_range(const DekadalSeries& series, DekadIndex first, DekadIndex last) {
    std::vector<double> out;
    if (last < first) return out;
    out.reserve(static_cast<std::size_t>(last.ordinal() - first.ordinal() + 1));
    auto it = series.samples.find(first);
    for (long o = first.ordinal(); o <= last.ordinal(); ++o) {
        const auto d = DekadIndex::from_ordinal(o);
        if (it == series.samples.end() || it->first != d) {
            fail(ErrorCode::CoverageGap, "unit '" + series.unit + "' " + std::string(to_string(series.variable)) +
                                             " missing dekad " + std::to_string(d.dekad) + " of " +
                                             std::to_string(d.year));
        }
        out.push_back(it->second);
        ++it;
    }
    return out;
}

std::vector<double> slice_season(const DekadalSeries& series, int harvest_year, const SeasonWindow& window) {
    return slice_range(series, window.first_dekad(harvest_year), window.last_dekad(harvest_year));
}

}  // namespace yieldcast

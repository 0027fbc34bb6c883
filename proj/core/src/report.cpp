#include "conedelta/report.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "conedelta/errors.hpp"
#include "conedelta/version.hpp"

namespace conedelta::report {

namespace {

using json = nlohmann::ordered_json;

std::string fmt15(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

json pairs_to_json(const std::vector<std::pair<std::string, std::string>>& v) {
    json j = json::object();
    for (const auto& [k, val] : v) j[k] = val;
    return j;
}

json scalars_to_json(const std::vector<std::pair<std::string, double>>& v) {
    json j = json::object();
    for (const auto& [k, val] : v) j[k] = val;
    return j;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

double SpectralReport::scalar(const std::string& k) const {
    for (const auto& [key, v] : scalars)
        if (key == k) return v;
    throw InvalidInputError("SpectralReport: no scalar named " + k);
}

std::string SpectralReport::to_json() const {
    json j;
    j["version"] = version;
    j["subcommand"] = subcommand;
    j["config"] = pairs_to_json(config_echo);
    j["scalars"] = scalars_to_json(scalars);
    j["notes"] = pairs_to_json(notes);
    json tabs = json::array();
    for (const auto& t : tables) {
        json jt;
        jt["name"] = t.name;
        jt["header"] = t.header;
        jt["rows"] = t.rows;
        tabs.push_back(jt);
    }
    j["tables"] = tabs;
    j["timings_ms"] = scalars_to_json(timings_ms);
    return j.dump(2);
}

SpectralReport SpectralReport::from_json(const std::string& text) {
    json j = json::parse(text);
    SpectralReport r;
    r.version = j.at("version").get<std::string>();
    r.subcommand = j.at("subcommand").get<std::string>();
    for (const auto& [k, v] : j.at("config").items())
        r.config_echo.emplace_back(k, v.get<std::string>());
    for (const auto& [k, v] : j.at("scalars").items())
        r.scalars.emplace_back(k, v.get<double>());
    for (const auto& [k, v] : j.at("notes").items())
        r.notes.emplace_back(k, v.get<std::string>());
    for (const auto& jt : j.at("tables")) {
        CsvTable t;
        t.name = jt.at("name").get<std::string>();
        t.header = jt.at("header").get<std::vector<std::string>>();
        t.rows = jt.at("rows").get<std::vector<std::vector<double>>>();
        r.tables.push_back(std::move(t));
    }
    for (const auto& [k, v] : j.at("timings_ms").items())
        r.timings_ms.emplace_back(k, v.get<double>());
    return r;
}

void SpectralReport::write_csv(std::ostream& os) const {
    if (tables.empty()) return;
    const CsvTable& t = tables.front();
    for (std::size_t i = 0; i < t.header.size(); ++i)
        os << (i ? "," : "") << t.header[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt15(row[i]);
        os << "\n";
    }
}

void SpectralReport::write_plot_dat(std::ostream& os, const std::string& xcol,
                                    const std::string& ycol) const {
    if (tables.empty()) return;
    const CsvTable& t = tables.front();
    const int xi = t.column(xcol), yi = t.column(ycol);
    if (xi < 0 || yi < 0)
        throw InvalidInputError("write_plot_dat: unknown column " +
                                (xi < 0 ? xcol : ycol));
    os << "# " << xcol << " " << ycol << "\n";
    for (const auto& row : t.rows)
        os << fmt15(row[static_cast<std::size_t>(xi)]) << " "
           << fmt15(row[static_cast<std::size_t>(yi)]) << "\n";
}

void SpectralReport::write_files(const std::string& base, bool emit_plot,
                                 const std::string& xcol, const std::string& ycol) const {
    {
        std::ofstream csv(base + ".csv");
        if (!csv) throw InvalidInputError("cannot write " + base + ".csv");
        write_csv(csv);
    }
    {
        std::ofstream js(base + ".json");
        if (!js) throw InvalidInputError("cannot write " + base + ".json");
        js << to_json() << "\n";
    }
    if (emit_plot && !xcol.empty()) {
        std::ofstream dat(base + ".dat");
        if (!dat) throw InvalidInputError("cannot write " + base + ".dat");
        write_plot_dat(dat, xcol, ycol);
    }
}

SpectralReport make_report(const RunConfig& cfg) {
    SpectralReport r;
    r.version = kVersion;
    r.subcommand = cfg.subcommand;
    r.config_echo = cfg.echo();
    return r;
}

}  // namespace conedelta::report

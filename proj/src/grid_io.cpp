#include "hcma/grid_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "hcma/error.hpp"
#include "json.hpp"

namespace hcma {

using nlohmann::json;

namespace {

json header_json(const GridFunction& f) {
    const GridSpec& g = f.grid;
    return json{{"n", g.n},
                {"nt", g.nt},
                {"nx", g.nx},
                {"ny", g.ny},
                {"ox", g.ox},
                {"oy", g.oy},
                {"h", g.h()},
                {"omega11", f.omega11},
                {"symmetric", f.symmetric},
                {"topology", to_string(g.topology)}};
}

GridFunction from_header(const json& h) {
    static const char* keys[] = {"n", "nt", "nx", "ny", "ox", "oy", "h", "omega11", "symmetric", "topology"};
    for (auto it = h.begin(); it != h.end(); ++it) {
        bool known = false;
        for (const char* k : keys) known = known || it.key() == k;
        if (!known) throw ValidationError("grid header: unknown key '" + it.key() + "'");
    }
    try {
        GridSpec g;
        g.topology = topology_from_string(h.at("topology").get<std::string>());
        g.n = h.at("n").get<int>();
        g.nt = h.at("nt").get<int>();
        g.nx = h.at("nx").get<int>();
        g.ny = h.at("ny").get<int>();
        g.ox = h.value("ox", 0);
        g.oy = h.value("oy", 0);
        g.validate();
        GridFunction f(g, h.at("omega11").get<double>());
        f.symmetric = h.value("symmetric", false);
        return f;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("grid header: ") + e.what());
    }
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw Error("format_double: conversion failed");
    return std::string(buf, end);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    while (first < last && (*first == ' ' || *first == '\t')) ++first;
    while (last > first && (last[-1] == ' ' || last[-1] == '\t' || last[-1] == '\r')) --last;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ValidationError("cannot parse number '" + s + "'");
    return v;
}

void write_grid_csv(std::ostream& os, const GridFunction& f) {
    f.require_finite("write_grid_csv");
    const GridSpec& g = f.grid;
    os << "# " << header_json(f).dump() << '\n';
    os << "t,x,y,value\n";
    std::string line;
    for (int k = 0; k < g.nt; ++k)
        for (int i = 0; i < g.nx; ++i)
            for (int j = 0; j < g.ny; ++j) {
                line = format_double(g.t(k));
                line += ',';
                line += format_double(g.x(i));
                line += ',';
                line += format_double(g.y(j));
                line += ',';
                line += format_double(f(k, i, j));
                line += '\n';
                os << line;
            }
}

GridFunction read_grid_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0)
        throw ValidationError("grid csv: missing '# {header}' line");
    json h;
    try {
        h = json::parse(line.substr(2));
    } catch (const json::exception& e) {
        throw ValidationError(std::string("grid csv header: ") + e.what());
    }
    GridFunction f = from_header(h);
    if (!std::getline(is, line) || line.rfind("t,x,y,value", 0) != 0)
        throw ValidationError("grid csv: missing column line");
    const std::size_t m = f.values.size();
    std::size_t row = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        if (row >= m) throw ValidationError("grid csv: more rows than the header allows");
        const auto c = line.rfind(',');
        if (c == std::string::npos) throw ValidationError("grid csv: malformed row");
        f.values[row++] = parse_double(line.substr(c + 1));
    }
    if (row != m) throw ValidationError("grid csv: fewer rows than the header declares");
    f.require_finite("read_grid_csv");
    return f;
}

void save_grid_csv(const std::string& path, const GridFunction& f) {
    std::ostringstream os;
    write_grid_csv(os, f);
    write_file_atomic(path, os.str());
}

GridFunction load_grid_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open grid file '" + path + "'");
    return read_grid_csv(in);
}

std::string grid_to_json(const GridFunction& f) {
    f.require_finite("grid_to_json");
    json j{{"header", header_json(f)}, {"values", f.values}};
    return j.dump();
}

GridFunction grid_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("grid json: ") + e.what());
    }
    if (!j.contains("header") || !j.contains("values"))
        throw ValidationError("grid json: needs 'header' and 'values'");
    GridFunction f = from_header(j["header"]);
    auto vals = j["values"].get<std::vector<double>>();
    if (vals.size() != f.values.size()) throw ValidationError("grid json: value count mismatch");
    f.values = std::move(vals);
    f.require_finite("grid_from_json");
    return f;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot open '" + tmp + "' for writing");
        out << contents;
        out.flush();
        if (!out) throw Error("write to '" + tmp + "' failed");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

}  // namespace hcma

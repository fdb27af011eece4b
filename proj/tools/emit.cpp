#include "emit.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "biphoton/error.hpp"

namespace biphoton::io {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    return f;
}

void finish(std::ofstream& f, const std::string& path) {
    f.flush();
    if (!f) throw IoError("write to '" + path + "' failed");
}

void write_meta(std::ofstream& f, const Meta& meta) {
    for (const auto& [k, v] : meta) f << "# " << k << '=' << v << '\n';
}

}  // namespace

void write_curve_csv(const std::string& path, const Curve& curve, const Meta& extra) {
    Meta meta = curve.meta;
    for (const auto& [k, v] : extra) meta[k] = v;
    meta["columns"] = "x,y";
    auto f = open_out(path);
    write_meta(f, meta);
    for (std::size_t i = 0; i < curve.xs.size(); ++i)
        f << format_double(curve.xs[i]) << ',' << format_double(curve.ys[i]) << '\n';
    finish(f, path);
}

void write_table_csv(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows, const Meta& meta_in) {
    Meta meta = meta_in;
    std::string cols;
    for (std::size_t i = 0; i < columns.size(); ++i) cols += (i ? "," : "") + columns[i];
    meta["columns"] = cols;
    auto f = open_out(path);
    write_meta(f, meta);
    for (const auto& row : rows) {
        if (row.size() != columns.size()) throw ValidationError("table row width does not match columns");
        for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << format_double(row[i]);
        f << '\n';
    }
    finish(f, path);
}

void write_matrix_csv(const std::string& path, const std::vector<double>& row_axis,
                      const std::vector<double>& col_axis, const Eigen::MatrixXd& values, const Meta& meta) {
    if (values.rows() != static_cast<Eigen::Index>(row_axis.size()) ||
        values.cols() != static_cast<Eigen::Index>(col_axis.size()))
        throw ValidationError("matrix dimensions do not match its axes");
    auto f = open_out(path);
    write_meta(f, meta);
    f << "nan";
    for (double c : col_axis) f << ',' << format_double(c);
    f << '\n';
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        f << format_double(row_axis[i]);
        for (Eigen::Index j = 0; j < values.cols(); ++j) f << ',' << format_double(values(i, j));
        f << '\n';
    }
    finish(f, path);
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
    auto f = open_out(path);
    f << j.dump(2) << '\n';
    finish(f, path);
}

CsvData read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open '" + path + "'");
    CsvData d;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        if (line.rfind("# ", 0) == 0) {
            auto eq = line.find('=');
            if (eq != std::string::npos) d.meta[line.substr(2, eq - 2)] = line.substr(eq + 1);
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        d.rows.push_back(std::move(row));
    }
    return d;
}

}  // namespace biphoton::io

#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "biphoton/curve.hpp"
#include "json.hpp"

namespace biphoton::io {

using Meta = std::map<std::string, std::string>;

// "%.17g"; nan and inf spelled as strtod reads them back.
std::string format_double(double v);

// `# key=value` lines, then `x,y` rows.
void write_curve_csv(const std::string& path, const Curve& curve, const Meta& extra = {});

// `# key=value` lines (including `columns=`), then comma-separated rows.
void write_table_csv(const std::string& path, const std::vector<std::string>& columns,
                     const std::vector<std::vector<double>>& rows, const Meta& meta = {});

// First data row: the column axis preceded by the corner label `nan`; each
// following row: the row-axis value then the matrix row.
void write_matrix_csv(const std::string& path, const std::vector<double>& row_axis,
                      const std::vector<double>& col_axis, const Eigen::MatrixXd& values, const Meta& meta = {});

void write_json(const std::string& path, const nlohmann::ordered_json& j);

struct CsvData {
    Meta meta;
    std::vector<std::vector<double>> rows;
};

CsvData read_csv(const std::string& path);

}  // namespace biphoton::io

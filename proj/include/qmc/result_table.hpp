#pragma once

#include <map>
#include <string>
#include <vector>

namespace qmc {

/// Column-oriented numeric records plus a metadata header. Rows are kept in
/// the order they were appended; producers sort by (step, vertex) where that
/// applies. All CSV/JSON numbers are printed with 17 significant digits so
/// repeated runs are byte-identical and both encodings carry the same
/// payload.
struct ResultTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
};

using Metadata = std::map<std::string, std::string>;

std::string format_double(double value);  // %.17g

std::string tables_to_csv(const Metadata& meta, const std::vector<ResultTable>& tables);
std::string tables_to_json(const Metadata& meta, const std::vector<ResultTable>& tables);

}  // namespace qmc

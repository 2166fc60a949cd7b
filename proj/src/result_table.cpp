#include "qmc/result_table.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qmc {

void ResultTable::add_row(std::vector<double> row) {
    if (row.size() != columns.size())
        throw std::domain_error("ResultTable: row width does not match columns");
    for (double v : row)
        if (!std::isfinite(v)) throw std::domain_error("ResultTable: non-finite value");
    rows.push_back(std::move(row));
}

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string tables_to_csv(const Metadata& meta, const std::vector<ResultTable>& tables) {
    std::string out;
    for (const auto& [key, value] : meta) out += "# " + key + "=" + value + "\n";
    bool first = true;
    for (const ResultTable& table : tables) {
        if (!first) out += "\n";
        first = false;
        out += "# table=" + table.name + "\n";
        for (size_t c = 0; c < table.columns.size(); ++c) {
            if (c) out += ",";
            out += table.columns[c];
        }
        out += "\n";
        for (const auto& row : table.rows) {
            for (size_t c = 0; c < row.size(); ++c) {
                if (c) out += ",";
                out += format_double(row[c]);
            }
            out += "\n";
        }
    }
    return out;
}

std::string tables_to_json(const Metadata& meta, const std::vector<ResultTable>& tables) {
    nlohmann::ordered_json root;
    nlohmann::ordered_json meta_json = nlohmann::ordered_json::object();
    for (const auto& [key, value] : meta) meta_json[key] = value;
    root["metadata"] = meta_json;
    root["tables"] = nlohmann::ordered_json::array();
    for (const ResultTable& table : tables) {
        nlohmann::ordered_json t;
        t["name"] = table.name;
        t["columns"] = table.columns;
        // numbers serialised as 17-significant-digit strings parsed back to
        // JSON numbers, keeping the payload identical to the CSV encoding
        auto rows = nlohmann::ordered_json::array();
        for (const auto& row : table.rows) {
            auto r = nlohmann::ordered_json::array();
            for (double v : row)
                r.push_back(nlohmann::ordered_json::parse(format_double(v)));
            rows.push_back(std::move(r));
        }
        t["rows"] = std::move(rows);
        root["tables"].push_back(std::move(t));
    }
    return root.dump(2) + "\n";
}

}  // namespace qmc

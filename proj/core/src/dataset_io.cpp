#include "bvs/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "bvs/error.hpp"

namespace bvs {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r\"");
        const auto e = cell.find_last_not_of(" \t\r\"");
        out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

Dataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty dataset file: " + path);
    const auto header = split(line);
    if (header.size() < 2) throw IoError(path + ": need a response column and at least one covariate");
    std::vector<std::vector<double>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw IoError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(header.size()) + " fields");
        std::vector<double> row(cells.size());
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const auto& c = cells[j];
            auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), row[j]);
            if (ec != std::errc() || ptr != c.data() + c.size())
                throw IoError(path + ":" + std::to_string(lineno) + ": non-numeric field '" + c + "'");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError(path + ": no data rows");
    Dataset d;
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index p = static_cast<Eigen::Index>(header.size()) - 1;
    d.y.resize(n);
    d.X.resize(n, p);
    for (Eigen::Index i = 0; i < n; ++i) {
        d.y(i) = rows[i][0];
        for (Eigen::Index j = 0; j < p; ++j) d.X(i, j) = rows[i][j + 1];
    }
    d.names.assign(header.begin() + 1, header.end());
    d.validate();
    return d;
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write dataset file: " + path);
    out << "y";
    for (int j = 0; j < data.p(); ++j)
        out << ',' << (j < static_cast<int>(data.names.size()) ? data.names[j] : "x" + std::to_string(j + 1));
    out << '\n' << std::setprecision(17);
    for (int i = 0; i < data.n(); ++i) {
        out << data.y(i);
        for (int j = 0; j < data.p(); ++j) out << ',' << data.X(i, j);
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace bvs

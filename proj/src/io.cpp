#include "tfet/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "tfet/errors.hpp"

namespace tfet {

void Table::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size()) {
        throw ConfigError("table", fmt::format("row has {} cells, header has {}", cells.size(), columns.size()));
    }
    rows.push_back(std::move(cells));
}

std::size_t Table::column(const std::string & name) const {
    for (std::size_t k = 0; k < columns.size(); ++k) {
        if (columns[k] == name) return k;
    }
    throw ConfigError("table", "no column named " + name);
}

double Table::number(std::size_t row, const std::string & name) const {
    const std::string & cell = rows.at(row).at(column(name));
    if (cell == "nan") return std::numeric_limits<double>::quiet_NaN();
    return std::stod(cell);
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    return fmt::format("{}", v);  // shortest representation that parses back exactly
}

std::string to_csv(const Table & t) {
    std::string out;
    for (auto & m : t.meta) out += "# " + m + "\n";
    for (std::size_t k = 0; k < t.columns.size(); ++k) out += (k ? "," : "") + t.columns[k];
    out += "\n";
    for (auto & r : t.rows) {
        for (std::size_t k = 0; k < r.size(); ++k) out += (k ? "," : "") + r[k];
        out += "\n";
    }
    return out;
}

Table parse_csv(const std::string & text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    bool header = false;
    auto split = [](const std::string & s) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(s);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!s.empty() && s.back() == ',') cells.emplace_back();
        return cells;
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            t.meta.push_back(line.size() > 2 ? line.substr(2) : "");
            continue;
        }
        if (!header) {
            t.columns = split(line);
            header = true;
        } else {
            t.add_row(split(line));
        }
    }
    return t;
}

void write_text_file(const std::filesystem::path & path, const std::string & text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError(fmt::format("cannot write {}", path.string()));
    out << text;
    if (!out) throw IoError(fmt::format("write failed for {}", path.string()));
}

std::string read_text_file(const std::filesystem::path & path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot read {}", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_csv(const std::filesystem::path & path, const Table & t) { write_text_file(path, to_csv(t)); }

Table read_csv(const std::filesystem::path & path) { return parse_csv(read_text_file(path)); }

Table field_table(const std::vector<const FieldMap *> & fields) {
    if (fields.empty()) throw ConfigError("table", "no fields to dump");
    const Mesh2D & m = fields.front()->mesh;
    Table t;
    t.columns = {"x_nm", "y_nm"};
    for (auto * f : fields) {
        require_same_mesh(*fields.front(), *f, "field_table");
        t.columns.push_back(fmt::format("{}_{}", quantity_name(f->quantity), quantity_unit(f->quantity)));
    }
    for (int i = 0; i <= m.nx; ++i) {
        for (int j = 0; j <= m.ny; ++j) {
            std::vector<std::string> row{format_number(m.x(i)), format_number(m.y(j))};
            for (auto * f : fields) row.push_back(format_number((*f)(i, j)));
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

std::string sha256_hex(const std::string & bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw IoError("sha256 failed");
    }
    std::string hex;
    for (unsigned int k = 0; k < len; ++k) hex += fmt::format("{:02x}", digest[k]);
    return hex;
}

} // namespace tfet

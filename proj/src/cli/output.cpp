#include "cli/output.hpp"

#include <fstream>
#include <iostream>

#include "cvwit/error.hpp"

namespace cvwit::cli {

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_cell(const Json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_null()) return "";
    return value.dump();
}

void write_csv(std::ostream& os, const std::vector<std::string>& header, const std::vector<Json>& rows) {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << csv_escape(header[i]);
    os << "\r\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) os << ',';
            const auto it = row.find(header[i]);
            if (it != row.end()) os << csv_escape(csv_cell(*it));
        }
        os << "\r\n";
    }
}

void write_json(std::ostream& os, const Json& doc) { os << doc.dump(2) << '\n'; }

void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw Error("failed to write to stdout");
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file '" + path + "'");
    out << text;
    out.close();
    if (!out) throw Error("failed to write output file '" + path + "'");
}

}  // namespace cvwit::cli

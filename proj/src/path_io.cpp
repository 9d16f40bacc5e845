#include "sigdev/path_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "sigdev/errors.hpp"

namespace sigdev {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& text, std::size_t line_no) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw DomainError("line " + std::to_string(line_no) + ": cannot parse number '" + text + "'");
    }
    return value;
}

std::ifstream open_or_throw(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw DomainError("cannot open '" + filename + "'");
    return in;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

Path read_path_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            header = split_commas(trim(line));
            break;
        }
    }
    if (header.size() < 2 || header[0] != "t") {
        throw DomainError("CSV header must be 't,x1,...,xd'");
    }
    const std::size_t d = header.size() - 1;
    for (std::size_t k = 0; k < d; ++k) {
        if (header[k + 1] != "x" + std::to_string(k + 1)) {
            throw DomainError("CSV header column " + std::to_string(k + 2) + " must be 'x" +
                              std::to_string(k + 1) + "'");
        }
    }
    std::vector<double> times;
    std::vector<double> pts;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto cells = split_commas(t);
        if (cells.size() != d + 1) {
            throw DomainError("line " + std::to_string(line_no) + ": expected " +
                              std::to_string(d + 1) + " columns");
        }
        times.push_back(parse_double(cells[0], line_no));
        for (std::size_t k = 0; k < d; ++k) pts.push_back(parse_double(cells[k + 1], line_no));
    }
    return Path(std::move(times), std::move(pts), d);
}

Path read_path_csv_file(const std::string& filename) {
    auto in = open_or_throw(filename);
    return read_path_csv(in);
}

void write_path_csv(std::ostream& out, const Path& path) {
    out << "t";
    for (std::size_t k = 0; k < path.dim(); ++k) out << ",x" << (k + 1);
    out << '\n';
    for (std::size_t i = 0; i < path.size(); ++i) {
        out << format_double(path.time(i));
        for (double x : path.point(i)) out << ',' << format_double(x);
        out << '\n';
    }
}

std::vector<NamedPath> read_paths_jsonl(std::istream& in) {
    std::vector<NamedPath> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            NamedPath np;
            np.id = j.contains("id") ? j.at("id").get<std::string>() : std::to_string(out.size());
            auto t = j.at("t").get<std::vector<double>>();
            auto x = j.at("x").get<std::vector<std::vector<double>>>();
            if (x.size() != t.size()) throw DomainError("'t' and 'x' lengths differ");
            np.path = Path(std::move(t), x);
            out.push_back(std::move(np));
        } catch (const nlohmann::json::exception& e) {
            throw DomainError("line " + std::to_string(line_no) + ": " + e.what());
        } catch (const DomainError& e) {
            throw DomainError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<NamedPath> read_paths_jsonl_file(const std::string& filename) {
    auto in = open_or_throw(filename);
    return read_paths_jsonl(in);
}

void write_paths_jsonl(std::ostream& out, const std::vector<NamedPath>& paths) {
    // Numbers are written by hand so they round-trip exactly.
    for (const auto& np : paths) {
        out << "{\"id\": " << nlohmann::json(np.id).dump() << ", \"t\": [";
        for (std::size_t i = 0; i < np.path.size(); ++i) {
            if (i) out << ", ";
            out << format_double(np.path.time(i));
        }
        out << "], \"x\": [";
        for (std::size_t i = 0; i < np.path.size(); ++i) {
            if (i) out << ", ";
            out << '[';
            const auto p = np.path.point(i);
            for (std::size_t k = 0; k < p.size(); ++k) {
                if (k) out << ", ";
                out << format_double(p[k]);
            }
            out << ']';
        }
        out << "]}\n";
    }
}

std::vector<NamedPath> read_paths_file(const std::string& filename) {
    const auto ends_with = [&](const std::string& suffix) {
        return filename.size() >= suffix.size() &&
               filename.compare(filename.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends_with(".jsonl") || ends_with(".json")) return read_paths_jsonl_file(filename);
    return {NamedPath{filename, read_path_csv_file(filename)}};
}

}  // namespace sigdev

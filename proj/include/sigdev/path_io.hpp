#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sigdev/paths.hpp"

namespace sigdev {

/// A path together with its identifier from a JSON Lines file.
struct NamedPath {
    std::string id;
    Path path;
};

/// CSV with header `t,x1,...,xd`, one row per sample.
Path read_path_csv(std::istream& in);
Path read_path_csv_file(const std::string& filename);
void write_path_csv(std::ostream& out, const Path& path);

/// JSON Lines, one `{"id": ..., "t": [...], "x": [[...], ...]}` object per line.
std::vector<NamedPath> read_paths_jsonl(std::istream& in);
std::vector<NamedPath> read_paths_jsonl_file(const std::string& filename);
void write_paths_jsonl(std::ostream& out, const std::vector<NamedPath>& paths);

/// Dispatches on extension: `.jsonl`/`.json` read every path, anything else is
/// a single CSV path with id equal to the filename.
std::vector<NamedPath> read_paths_file(const std::string& filename);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

}  // namespace sigdev

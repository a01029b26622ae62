#ifndef CLB_IO_HPP_
#define CLB_IO_HPP_

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "clb/carleman.hpp"

namespace clb {

// Writes through a sibling temporary file and renames it into place; the
// temporary is removed if `body` throws.
void write_file_atomic(const std::string& path, const std::function<void(std::ostream&)>& body);

// `t,max,median,min,mean`
void write_error_csv(std::ostream& out, const std::vector<ErrorStats>& series);

// Flat `key=value` lines; `#` starts a comment, blank lines are skipped.
std::map<std::string, std::string> parse_key_values(std::istream& in);
std::map<std::string, std::string> read_key_value_file(const std::string& path);

}  // namespace clb

#endif  // CLB_IO_HPP_

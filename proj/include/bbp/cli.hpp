#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bbp {

struct CliConfig {
    long precision_digits = 200;
    std::string catalog_path;
    unsigned threads = 0;
};

// args excludes the program name. Exit codes: 0 ok, 1 verification failure, 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bbp

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "grulstm/cli.hpp"
#include "grulstm/error.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty() || args[0] == "--help" || args[0] == "-h" || args[0] == "help") {
        std::cout << grulstm::usage_text();
        return args.empty() ? 2 : 0;
    }
    try {
        return grulstm::dispatch(grulstm::parse_config(args));
    } catch (const grulstm::Error& e) {
        std::cerr << "error code=" << e.code() << " " << e.what() << '\n';
        if (e.code() == grulstm::errc::kUsage) {
            std::cerr << grulstm::usage_text();
            return 2;
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error code=E_INTERNAL " << e.what() << '\n';
        return 1;
    }
}

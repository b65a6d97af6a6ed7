// Scripted external evaluator for protocol tests.
//
//   fake_evaluator [mode]
//     ok       accuracy = popcount / width (default)
//     fixed:X  always answer "OK X"
//     err      answer "ERR no such column"
//     garbage  answer "hello"
//     silent   never answer EVAL
//     exit3    exit with status 3 on the first EVAL
//     noready  answer the handshake with "NOPE"

#include <unistd.h>

#include <algorithm>
#include <iostream>
#include <string>
#include <thread>

int main(int argc, char** argv) {
    const std::string mode = argc > 1 ? argv[1] : "ok";
    std::string line;
    int width = 0;
    while (std::getline(std::cin, line)) {
        if (line.rfind("HELLO EQFS 1 ", 0) == 0) {
            width = std::stoi(line.substr(13));
            std::cout << (mode == "noready" ? "NOPE" : "READY") << std::endl;
        } else if (line.rfind("EVAL ", 0) == 0) {
            const std::string bits = line.substr(5);
            if (mode == "silent") {
                std::this_thread::sleep_for(std::chrono::seconds(30));
            } else if (mode == "exit3") {
                return 3;
            } else if (mode == "err") {
                std::cout << "ERR no such column" << std::endl;
            } else if (mode == "garbage") {
                std::cout << "hello" << std::endl;
            } else if (mode.rfind("fixed:", 0) == 0) {
                std::cout << "OK " << mode.substr(6) << std::endl;
            } else {
                if (static_cast<int>(bits.size()) != width) {
                    std::cout << "ERR width" << std::endl;
                    continue;
                }
                const auto ones = std::count(bits.begin(), bits.end(), '1');
                std::cout << "OK " << static_cast<double>(ones) / width << std::endl;
            }
        } else if (line == "QUIT") {
            return 0;
        }
    }
    return 0;
}

#pragma once

#include <stdexcept>
#include <string>

#include "wirelab/circuit.hpp"
#include "wirelab/io.hpp"

namespace wirelab {

/// Ripple-carry adder over Toffoli and CNOT gates (MAJ/UMA construction),
/// fully wrapped in |0> initialisations and Z measurements. 2n+2 wires
/// (carry-in, n operand pairs, carry-out) and 6n+1 gates, deterministic in n.
inline Circuit generate_adder(std::size_t bits) {
    if (bits == 0) throw std::invalid_argument("generate_adder: bit width must be at least 1");

    std::string text;
    auto a = [](std::size_t i) { return "a" + std::to_string(i); };
    auto b = [](std::size_t i) { return "b" + std::to_string(i); };

    text += "init cin 0\n";
    for (std::size_t i = 0; i < bits; ++i) {
        text += "init " + a(i) + " 0\n";
        text += "init " + b(i) + " 0\n";
    }
    text += "init cout 0\n";

    auto maj = [&](const std::string& c, const std::string& y, const std::string& x) {
        text += "cnot " + x + " " + y + "\n";
        text += "cnot " + x + " " + c + "\n";
        text += "toffoli " + c + " " + y + " " + x + "\n";
    };
    auto uma = [&](const std::string& c, const std::string& y, const std::string& x) {
        text += "toffoli " + c + " " + y + " " + x + "\n";
        text += "cnot " + x + " " + c + "\n";
        text += "cnot " + c + " " + y + "\n";
    };

    maj("cin", b(0), a(0));
    for (std::size_t i = 1; i < bits; ++i) maj(a(i - 1), b(i), a(i));
    text += "cnot " + a(bits - 1) + " cout\n";
    for (std::size_t i = bits; i-- > 1;) uma(a(i - 1), b(i), a(i));
    uma("cin", b(0), a(0));

    text += "measure cin Z\n";
    for (std::size_t i = 0; i < bits; ++i) {
        text += "measure " + a(i) + " Z\n";
        text += "measure " + b(i) + " Z\n";
    }
    text += "measure cout Z\n";

    return parse_circuit(text);
}

}  // namespace wirelab

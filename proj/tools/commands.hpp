#pragma once

namespace battlife::cli {

int run(int argc, const char* const* argv);

} // namespace battlife::cli

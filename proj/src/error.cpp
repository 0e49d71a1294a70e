#include "hcivalue/error.hpp"

namespace hcivalue {

IngestError::IngestError(std::vector<RowError> rows)
    : FormatError([&] {
        std::string msg = std::to_string(rows.size()) + " invalid row(s)";
        for (const auto& r : rows) msg += "\n  line " + std::to_string(r.line) + ": " + r.message;
        return msg;
      }()),
      rows_(std::move(rows)) {}

}  // namespace hcivalue

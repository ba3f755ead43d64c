#pragma once

#include <string>
#include <string_view>

namespace cyents {

// Main article text of an HTML page: the paragraphs of the element whose
// direct <p> children carry the most text, entity-decoded, whitespace
// collapsed to single spaces. Scripts, styles and page chrome (nav, header,
// footer, aside, form) are ignored. Throws Error(kEmptyExtraction).
std::string extract_article(std::string_view html);

// &amp;, &#39;, &#x2019; and a handful of common named entities.
std::string decode_entities(std::string_view s);

}  // namespace cyents

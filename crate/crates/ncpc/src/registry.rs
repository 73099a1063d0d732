//! The 41 countries of the panel and their market classes.

use ncpc_core::{CountryCode, MarketClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountryRegistryEntry {
    pub code: CountryCode,
    pub name: &'static str,
    pub market_class: MarketClass,
}

const fn entry(code: &[u8; 2], name: &'static str, market_class: MarketClass) -> CountryRegistryEntry {
    CountryRegistryEntry {
        code: CountryCode::from_bytes(*code),
        name,
        market_class,
    }
}

use MarketClass::{Developed as D, Emerging as E, Frontier as F};

/// Sorted by code.
pub static REGISTRY: [CountryRegistryEntry; 41] = [
    entry(b"AG", "Argentina", F),
    entry(b"AU", "Australia", D),
    entry(b"BD", "Germany", D),
    entry(b"BG", "Belgium", D),
    entry(b"BR", "Brazil", E),
    entry(b"CH", "Canada", D),
    entry(b"CL", "Chile", E),
    entry(b"CN", "China", E),
    entry(b"CZ", "Czech Republic", E),
    entry(b"DK", "Denmark", D),
    entry(b"ES", "Spain", D),
    entry(b"FN", "Finland", D),
    entry(b"FR", "France", D),
    entry(b"GR", "Greece", E),
    entry(b"HN", "Hungary", E),
    entry(b"ID", "Indonesia", E),
    entry(b"IN", "India", E),
    entry(b"IR", "Ireland", D),
    entry(b"IT", "Italy", D),
    entry(b"JP", "Japan", D),
    entry(b"KO", "South Korea", D),
    entry(b"MX", "Mexico", E),
    entry(b"MY", "Malaysia", E),
    entry(b"NL", "Netherlands", D),
    entry(b"NW", "Norway", D),
    entry(b"OE", "Austria", D),
    entry(b"PH", "Philippines", E),
    entry(b"PO", "Poland", E),
    entry(b"PT", "Portugal", D),
    entry(b"RM", "Romania", F),
    entry(b"RS", "Russia", E),
    entry(b"SA", "South Africa", E),
    entry(b"SD", "Sweden", D),
    entry(b"SP", "Singapore", D),
    entry(b"SW", "Switzerland", D),
    entry(b"TH", "Thailand", E),
    entry(b"TK", "Turkey", F),
    entry(b"TW", "Taiwan", E),
    entry(b"UK", "United Kingdom", D),
    entry(b"US", "United States", D),
    entry(b"VE", "Venezuela", F),
];

pub fn lookup(code: CountryCode) -> Option<&'static CountryRegistryEntry> {
    REGISTRY
        .binary_search_by(|e| e.code.cmp(&code))
        .ok()
        .map(|i| &REGISTRY[i])
}

/// Class used when averaging coefficients for the text summary, where
/// Turkey is grouped with the emerging markets.
pub fn aggregation_class(code: CountryCode, class: MarketClass) -> MarketClass {
    if code.as_str() == "TK" {
        MarketClass::Emerging
    } else {
        class
    }
}

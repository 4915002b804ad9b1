/**
 * Bundled world layout keyed by ISO-3166-1 alpha-2 codes.
 *
 * A tile cartogram: each country is one equal-sized cell placed in rough
 * geographic arrangement (public-domain layout, drawn by hand for this
 * app). The analysis service never touches geometry; codes it reports that
 * have no cell here are rendered in an overflow strip so no payload entry
 * is ever dropped.
 */

export interface CountryCell {
  code: string;
  name: string;
  col: number;
  row: number;
}

export const GRID_COLS = 26;
export const GRID_ROWS = 13;

const CELLS: [string, string, number, number][] = [
  // North and Central America
  ["CA", "Canada", 2, 1],
  ["US", "United States", 2, 2],
  ["MX", "Mexico", 2, 3],
  ["CU", "Cuba", 3, 3],
  ["DO", "Dominican Republic", 4, 3],
  ["GT", "Guatemala", 2, 4],
  ["CR", "Costa Rica", 3, 4],
  ["PA", "Panama", 4, 4],
  // South America
  ["CO", "Colombia", 3, 5],
  ["VE", "Venezuela", 4, 5],
  ["GY", "Guyana", 5, 5],
  ["EC", "Ecuador", 2, 6],
  ["PE", "Peru", 3, 6],
  ["BR", "Brazil", 4, 6],
  ["BO", "Bolivia", 3, 7],
  ["PY", "Paraguay", 4, 7],
  ["CL", "Chile", 3, 8],
  ["AR", "Argentina", 4, 8],
  ["UY", "Uruguay", 5, 8],
  // Europe
  ["IS", "Iceland", 8, 0],
  ["NO", "Norway", 11, 0],
  ["SE", "Sweden", 12, 0],
  ["FI", "Finland", 13, 0],
  ["IE", "Ireland", 8, 1],
  ["GB", "United Kingdom", 9, 1],
  ["NL", "Netherlands", 10, 1],
  ["DK", "Denmark", 11, 1],
  ["EE", "Estonia", 12, 1],
  ["LV", "Latvia", 13, 1],
  ["RU", "Russia", 15, 1],
  ["FR", "France", 9, 2],
  ["BE", "Belgium", 10, 2],
  ["DE", "Germany", 11, 2],
  ["PL", "Poland", 12, 2],
  ["LT", "Lithuania", 13, 2],
  ["BY", "Belarus", 14, 2],
  ["PT", "Portugal", 8, 3],
  ["ES", "Spain", 9, 3],
  ["CH", "Switzerland", 10, 3],
  ["AT", "Austria", 11, 3],
  ["CZ", "Czechia", 12, 3],
  ["SK", "Slovakia", 13, 3],
  ["UA", "Ukraine", 14, 3],
  ["IT", "Italy", 10, 4],
  ["SI", "Slovenia", 11, 4],
  ["HR", "Croatia", 12, 4],
  ["HU", "Hungary", 13, 4],
  ["RO", "Romania", 14, 4],
  ["GR", "Greece", 11, 5],
  ["RS", "Serbia", 12, 5],
  ["BG", "Bulgaria", 13, 5],
  ["TR", "Turkey", 14, 5],
  // Africa
  ["MA", "Morocco", 8, 5],
  ["DZ", "Algeria", 9, 5],
  ["TN", "Tunisia", 10, 5],
  ["SN", "Senegal", 8, 6],
  ["ML", "Mali", 9, 6],
  ["NE", "Niger", 10, 6],
  ["LY", "Libya", 11, 6],
  ["EG", "Egypt", 12, 6],
  ["CI", "Ivory Coast", 8, 7],
  ["GH", "Ghana", 9, 7],
  ["NG", "Nigeria", 10, 7],
  ["TD", "Chad", 11, 7],
  ["SD", "Sudan", 12, 7],
  ["ET", "Ethiopia", 13, 7],
  ["CM", "Cameroon", 10, 8],
  ["CD", "DR Congo", 11, 8],
  ["UG", "Uganda", 12, 8],
  ["KE", "Kenya", 13, 8],
  ["AO", "Angola", 10, 9],
  ["ZM", "Zambia", 11, 9],
  ["TZ", "Tanzania", 12, 9],
  ["MG", "Madagascar", 14, 9],
  ["NA", "Namibia", 10, 10],
  ["ZW", "Zimbabwe", 11, 10],
  ["MZ", "Mozambique", 12, 10],
  ["ZA", "South Africa", 11, 11],
  // Middle East and Asia
  ["SY", "Syria", 15, 5],
  ["IQ", "Iraq", 16, 5],
  ["IR", "Iran", 17, 5],
  ["AF", "Afghanistan", 18, 5],
  ["NP", "Nepal", 19, 5],
  ["IL", "Israel", 14, 6],
  ["JO", "Jordan", 15, 6],
  ["SA", "Saudi Arabia", 16, 6],
  ["PK", "Pakistan", 17, 6],
  ["IN", "India", 18, 6],
  ["BD", "Bangladesh", 19, 6],
  ["MM", "Myanmar", 20, 6],
  ["AE", "United Arab Emirates", 16, 7],
  ["LK", "Sri Lanka", 18, 7],
  ["KZ", "Kazakhstan", 17, 4],
  ["UZ", "Uzbekistan", 18, 4],
  ["MN", "Mongolia", 20, 3],
  ["CN", "China", 20, 4],
  ["KP", "North Korea", 22, 3],
  ["KR", "South Korea", 22, 4],
  ["JP", "Japan", 23, 4],
  ["TW", "Taiwan", 21, 5],
  ["TH", "Thailand", 20, 7],
  ["VN", "Vietnam", 21, 7],
  ["PH", "Philippines", 22, 7],
  ["MY", "Malaysia", 20, 8],
  ["SG", "Singapore", 21, 8],
  ["ID", "Indonesia", 21, 9],
  // Oceania
  ["PG", "Papua New Guinea", 23, 9],
  ["AU", "Australia", 22, 10],
  ["NZ", "New Zealand", 24, 11],
];

export const WORLD_CELLS: CountryCell[] = CELLS.map(([code, name, col, row]) => ({
  code,
  name,
  col,
  row,
}));

const BY_CODE = new Map(WORLD_CELLS.map((cell) => [cell.code, cell]));

export function cellFor(code: string): CountryCell | undefined {
  return BY_CODE.get(code);
}

/// Plain-text table: first column left-aligned, the rest right-aligned.
pub struct Table {
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Table {
        Table {
            rows: vec![header.into_iter().map(Into::into).collect()],
        }
    }

    pub fn row<S: Into<String>>(&mut self, cells: impl IntoIterator<Item = S>) {
        self.rows.push(cells.into_iter().map(Into::into).collect());
    }

    pub fn render(&self) -> String {
        let cols = self.rows.iter().map(Vec::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..cols)
            .map(|j| {
                self.rows
                    .iter()
                    .filter_map(|r| r.get(j))
                    .map(|c| c.chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .collect();
        let mut out = String::new();
        for row in &self.rows {
            let mut line = String::new();
            for (j, width) in widths.iter().enumerate() {
                let cell = row.get(j).map_or("", String::as_str);
                if j == 0 {
                    line.push_str(&format!("{cell:<width$}"));
                } else {
                    line.push_str(&format!("  {cell:>width$}"));
                }
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::Table;

    #[test]
    fn aligns_columns() {
        let mut t = Table::new(["Model", "DF"]);
        t.row(["Regression", "5"]);
        t.row(["Total", "20"]);
        assert_eq!(
            t.render(),
            "Model       DF\nRegression   5\nTotal       20\n"
        );
    }

    #[test]
    fn short_rows_leave_blank_cells() {
        let mut t = Table::new(["a", "b", "c"]);
        t.row(["x", "1"]);
        assert_eq!(t.render(), "a  b  c\nx  1\n");
    }
}

pub mod translit;

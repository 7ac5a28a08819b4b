package com.example.shop.config;

import org.springframework.context.annotation.Configuration;

@Configuration
public class WebConfig {
}
